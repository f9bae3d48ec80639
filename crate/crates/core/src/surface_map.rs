//! Dart-based combinatorial maps of closed orientable surfaces.
//!
//! `sigma` rotates a dart counterclockwise around its vertex, `alpha` swaps the two
//! darts of an edge, and faces are the orbits of `phi = sigma . alpha`
//! (apply `alpha` first). Vertex, edge and face ids are the ranks of each orbit's
//! minimal dart.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceColor {
    R,
    G,
    B,
}

impl FaceColor {
    pub const ALL: [FaceColor; 3] = [FaceColor::R, FaceColor::G, FaceColor::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> FaceColor {
        FaceColor::ALL[i]
    }

    /// The color different from both arguments, which must differ.
    pub fn third(a: FaceColor, b: FaceColor) -> FaceColor {
        debug_assert_ne!(a, b);
        FaceColor::from_index(3 - a.index() - b.index())
    }
}

impl fmt::Display for FaceColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceColor::R => "R",
            FaceColor::G => "G",
            FaceColor::B => "B",
        })
    }
}

impl FromStr for FaceColor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" => Ok(FaceColor::R),
            "G" => Ok(FaceColor::G),
            "B" => Ok(FaceColor::B),
            _ => Err(format!("unknown color {s:?}")),
        }
    }
}

/// Color of every face, indexed by face id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceColoring(pub Vec<FaceColor>);

impl FaceColoring {
    pub fn color(&self, face: usize) -> FaceColor {
        self.0[face]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies `perm[old color index] = new color`.
    pub fn permuted(&self, perm: [FaceColor; 3]) -> FaceColoring {
        FaceColoring(self.0.iter().map(|c| perm[c.index()]).collect())
    }

    pub fn faces_of(&self, c: FaceColor) -> Vec<usize> {
        (0..self.0.len()).filter(|&f| self.0[f] == c).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed permutation {name}: {detail}")]
    MalformedPermutation { name: &'static str, detail: String },
    #[error("alpha has a fixed point at dart {0}")]
    AlphaFixedPoint(usize),
    #[error("alpha is not an involution at dart {0}")]
    AlphaNotInvolution(usize),
    #[error("map is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("odd Euler characteristic {0}")]
    OddEuler(i64),
    #[error("map has no darts")]
    Empty,
    #[error("face coloring: {0}")]
    Coloring(String),
    #[error("degenerate torus periods")]
    DegeneratePeriods,
    #[error("unsupported torus class {0:?}")]
    UnsupportedClass([usize; 3]),
    #[error("no proper 3-coloring of the faces exists")]
    NotColorable,
}

#[derive(Clone, Debug)]
pub struct CombinatorialMap {
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    alpha: Vec<usize>,
    phi: Vec<usize>,
    vertex_of: Vec<usize>,
    edge_of: Vec<usize>,
    face_of: Vec<usize>,
    vertices: Vec<Vec<usize>>,
    edges: Vec<[usize; 2]>,
    faces: Vec<Vec<usize>>,
}

fn check_permutation(name: &'static str, p: &[usize]) -> Result<(), MapError> {
    let mut seen = vec![false; p.len()];
    for (i, &x) in p.iter().enumerate() {
        if x >= p.len() {
            return Err(MapError::MalformedPermutation { name, detail: format!("image {x} of {i} out of range") });
        }
        if seen[x] {
            return Err(MapError::MalformedPermutation { name, detail: format!("image {x} repeated") });
        }
        seen[x] = true;
    }
    Ok(())
}

fn orbits(p: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut label = vec![usize::MAX; p.len()];
    let mut out = Vec::new();
    for d in 0..p.len() {
        if label[d] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = Vec::new();
        let mut x = d;
        while label[x] == usize::MAX {
            label[x] = id;
            orbit.push(x);
            x = p[x];
        }
        out.push(orbit);
    }
    (label, out)
}

/// Rejects odd Euler characteristics, which no orientable closed surface has.
pub fn check_euler(chi: i64) -> Result<(), MapError> {
    if chi.rem_euclid(2) != 0 || chi > 2 {
        return Err(MapError::OddEuler(chi));
    }
    Ok(())
}

impl CombinatorialMap {
    pub fn new(sigma: Vec<usize>, alpha: Vec<usize>) -> Result<Self, MapError> {
        let n = sigma.len();
        if n == 0 {
            return Err(MapError::Empty);
        }
        if alpha.len() != n {
            return Err(MapError::MalformedPermutation {
                name: "alpha",
                detail: format!("length {} differs from sigma length {n}", alpha.len()),
            });
        }
        check_permutation("sigma", &sigma)?;
        check_permutation("alpha", &alpha)?;
        for d in 0..n {
            if alpha[d] == d {
                return Err(MapError::AlphaFixedPoint(d));
            }
            if alpha[alpha[d]] != d {
                return Err(MapError::AlphaNotInvolution(d));
            }
        }
        let components = count_components(&sigma, &alpha);
        if components != 1 {
            return Err(MapError::Disconnected(components));
        }
        let mut sigma_inv = vec![0; n];
        for d in 0..n {
            sigma_inv[sigma[d]] = d;
        }
        let phi: Vec<usize> = (0..n).map(|d| sigma[alpha[d]]).collect();
        let (vertex_of, vertices) = orbits(&sigma);
        let (edge_of, edge_orbits) = orbits(&alpha);
        let (face_of, faces) = orbits(&phi);
        let edges = edge_orbits.iter().map(|o| [o[0], o[1]]).collect();
        let m = CombinatorialMap { sigma, sigma_inv, alpha, phi, vertex_of, edge_of, face_of, vertices, edges, faces };
        check_euler(m.euler_characteristic())?;
        Ok(m)
    }

    pub fn dart_count(&self) -> usize {
        self.sigma.len()
    }
    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d]
    }
    pub fn sigma_inv(&self, d: usize) -> usize {
        self.sigma_inv[d]
    }
    pub fn alpha(&self, d: usize) -> usize {
        self.alpha[d]
    }
    pub fn phi(&self, d: usize) -> usize {
        self.phi[d]
    }
    pub fn sigma_perm(&self) -> &[usize] {
        &self.sigma
    }
    pub fn alpha_perm(&self) -> &[usize] {
        &self.alpha
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.vertex_of[d]
    }
    pub fn edge_of(&self, d: usize) -> usize {
        self.edge_of[d]
    }
    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    /// Darts of vertex `v` in counterclockwise order, starting at its minimal dart.
    pub fn vertex_darts(&self, v: usize) -> &[usize] {
        &self.vertices[v]
    }
    /// Darts of face `f` in `phi` order, starting at its minimal dart.
    pub fn face_darts(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }
    pub fn edge_darts(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    /// Endpoints of edge `e` as vertex ids.
    pub fn edge_ends(&self, e: usize) -> [usize; 2] {
        let [a, b] = self.edges[e];
        [self.vertex_of[a], self.vertex_of[b]]
    }

    /// The two faces on either side of edge `e` (equal for an edge bordering one face twice).
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        let [a, b] = self.edges[e];
        [self.face_of[a], self.face_of[b]]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// Each face as its cyclic sequence of vertex ids.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.faces.iter().map(|o| o.iter().map(|&d| self.vertex_of[d]).collect()).collect()
    }

    /// Each face as its cyclic sequence of edge ids.
    pub fn face_edges(&self) -> Vec<Vec<usize>> {
        self.faces.iter().map(|o| o.iter().map(|&d| self.edge_of[d]).collect()).collect()
    }

    /// Each vertex as its counterclockwise sequence of edge ids.
    pub fn vertex_edges(&self) -> Vec<Vec<usize>> {
        self.vertices.iter().map(|o| o.iter().map(|&d| self.edge_of[d]).collect()).collect()
    }

    pub fn vertex_valences(&self) -> Vec<usize> {
        self.vertices.iter().map(|o| o.len()).collect()
    }

    pub fn face_sizes(&self) -> Vec<usize> {
        self.faces.iter().map(|o| o.len()).collect()
    }

    pub fn dual(&self) -> CombinatorialMap {
        CombinatorialMap::new(self.phi.clone(), self.alpha.clone()).expect("dual of a valid map is valid")
    }

    /// One medial vertex per edge. Darts `2d` and `2d+1` are the two sides of the
    /// corner between `d` and `sigma(d)`; the first sits at the medial vertex of
    /// `edge(d)`, the second at that of `edge(sigma(d))`.
    pub fn medial(&self) -> CombinatorialMap {
        let n = self.dart_count();
        let plus = |d: usize| 2 * d;
        let minus = |d: usize| 2 * d + 1;
        let mut sigma = vec![0; 2 * n];
        let mut alpha = vec![0; 2 * n];
        for d in 0..n {
            alpha[plus(d)] = minus(d);
            alpha[minus(d)] = plus(d);
            sigma[plus(d)] = minus(self.sigma_inv[d]);
            sigma[minus(d)] = plus(self.alpha[self.sigma[d]]);
        }
        CombinatorialMap::new(sigma, alpha).expect("medial of a valid map is valid")
    }

    /// Truncation: each dart `d` becomes a vertex with darts `3d` (along the old
    /// edge), `3d+1` and `3d+2` (towards the neighbouring corners).
    pub fn truncate(&self) -> CombinatorialMap {
        let n = self.dart_count();
        let mut sigma = vec![0; 3 * n];
        let mut alpha = vec![0; 3 * n];
        for d in 0..n {
            let (e, nx, pv) = (3 * d, 3 * d + 1, 3 * d + 2);
            sigma[e] = nx;
            sigma[nx] = pv;
            sigma[pv] = e;
            alpha[e] = 3 * self.alpha[d];
            alpha[nx] = 3 * self.sigma[d] + 2;
            alpha[3 * self.sigma[d] + 2] = nx;
        }
        CombinatorialMap::new(sigma, alpha).expect("truncation of a valid map is valid")
    }

    /// Trivalent inflation: truncation of the medial map. Every input face of size m
    /// becomes an f-face of size 2m, every input edge a quadrilateral e-face, and every
    /// input vertex of valence j a v-face of size 2j. The returned coloring gives
    /// f-faces R, e-faces G and v-faces B.
    pub fn inflate_trivalent(&self) -> (CombinatorialMap, FaceColoring, Vec<InflatedFace>) {
        let med = self.medial();
        let out = med.truncate();
        let mut origin = Vec::with_capacity(out.face_count());
        let mut colors = Vec::with_capacity(out.face_count());
        for f in 0..out.face_count() {
            // Faces through edge-type darts (3x) come from medial faces; the rest
            // are the polygons replacing medial vertices.
            let darts = out.face_darts(f);
            let o = match darts.iter().find(|&&d3| d3 % 3 == 0) {
                Some(&d3) => {
                    let md = d3 / 3;
                    let d = md / 2;
                    if md % 2 == 0 {
                        InflatedFace::Face(self.face_of(self.alpha(d)))
                    } else {
                        InflatedFace::Vertex(self.vertex_of(d))
                    }
                }
                None => InflatedFace::Edge(self.edge_of(darts[0] / 6)),
            };
            colors.push(match o {
                InflatedFace::Face(_) => FaceColor::R,
                InflatedFace::Edge(_) => FaceColor::G,
                InflatedFace::Vertex(_) => FaceColor::B,
            });
            origin.push(o);
        }
        (out, FaceColoring(colors), origin)
    }

    pub fn serialize(&self, coloring: Option<&FaceColoring>) -> String {
        let mut s = String::new();
        s.push_str("tessmap 1\n");
        s.push_str(&format!("darts {}\n", self.dart_count()));
        s.push_str("sigma");
        for x in &self.sigma {
            s.push_str(&format!(" {x}"));
        }
        s.push_str("\nalpha");
        for x in &self.alpha {
            s.push_str(&format!(" {x}"));
        }
        s.push('\n');
        if let Some(c) = coloring {
            for (f, col) in c.0.iter().enumerate() {
                s.push_str(&format!("facecolor {f} {col}\n"));
            }
        }
        s
    }

    /// Isomorphism test: some dart bijection commuting with sigma and alpha.
    pub fn is_isomorphic(&self, other: &CombinatorialMap) -> bool {
        let n = self.dart_count();
        if n != other.dart_count()
            || self.vertex_count() != other.vertex_count()
            || self.face_count() != other.face_count()
        {
            return false;
        }
        'root: for start in 0..n {
            let mut map = vec![usize::MAX; n];
            let mut used = vec![false; n];
            map[0] = start;
            used[start] = true;
            let mut queue = VecDeque::from([0usize]);
            while let Some(d) = queue.pop_front() {
                let img = map[d];
                for (a, b) in [(self.sigma[d], other.sigma[img]), (self.alpha[d], other.alpha[img])] {
                    if map[a] == usize::MAX {
                        if used[b] {
                            continue 'root;
                        }
                        map[a] = b;
                        used[b] = true;
                        queue.push_back(a);
                    } else if map[a] != b {
                        continue 'root;
                    }
                }
            }
            return true;
        }
        false
    }

    /// Face adjacency graph, or `None` when some edge has the same face on both sides.
    pub fn dual_graph(&self) -> Option<SimpleGraph> {
        let mut g = SimpleGraph::new(self.face_count());
        for e in 0..self.edge_count() {
            let [f, h] = self.edge_faces(e);
            if f == h {
                return None;
            }
            g.add_edge(f, h);
        }
        Some(g)
    }
}

/// Which input cell an inflated face comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InflatedFace {
    Vertex(usize),
    Edge(usize),
    Face(usize),
}

fn count_components(sigma: &[usize], alpha: &[usize]) -> usize {
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(d) = stack.pop() {
            for x in [sigma[d], alpha[d]] {
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
    }
    count
}

fn parse_err(line: usize, msg: impl Into<String>) -> MapError {
    MapError::Parse { line, msg: msg.into() }
}

fn parse_perm(line: usize, rest: &[&str], n: usize) -> Result<Vec<usize>, MapError> {
    if rest.len() != n {
        return Err(parse_err(line, format!("expected {n} integers, found {}", rest.len())));
    }
    rest.iter()
        .map(|t| {
            let x: usize = t.parse().map_err(|_| parse_err(line, format!("bad integer {t:?}")))?;
            if x >= n {
                return Err(parse_err(line, format!("integer {x} out of range 0..{n}")));
            }
            Ok(x)
        })
        .collect()
}

/// Parses the `tessmap 1` text format.
pub fn load_map(text: &str) -> Result<(CombinatorialMap, Option<FaceColoring>), MapError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    if header != "tessmap 1" {
        return Err(parse_err(ln, format!("expected header `tessmap 1`, found {header:?}")));
    }
    let (ln, darts_line) = lines.next().ok_or_else(|| parse_err(ln + 1, "missing `darts` line"))?;
    let toks: Vec<&str> = darts_line.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "darts" {
        return Err(parse_err(ln, "expected `darts N`"));
    }
    let n: usize = toks[1].parse().map_err(|_| parse_err(ln, format!("bad dart count {:?}", toks[1])))?;
    if !n.is_multiple_of(2) {
        return Err(parse_err(ln, format!("dart count {n} is odd")));
    }
    let mut sigma = None;
    let mut alpha = None;
    let mut colors: Vec<(usize, usize, FaceColor)> = Vec::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "sigma" if sigma.is_none() => sigma = Some(parse_perm(ln, &toks[1..], n)?),
            "alpha" if alpha.is_none() => alpha = Some(parse_perm(ln, &toks[1..], n)?),
            "facecolor" => {
                if toks.len() != 3 {
                    return Err(parse_err(ln, "expected `facecolor <face> <R|G|B>`"));
                }
                let f: usize = toks[1].parse().map_err(|_| parse_err(ln, format!("bad face index {:?}", toks[1])))?;
                let c: FaceColor = toks[2].parse().map_err(|e: String| parse_err(ln, e))?;
                colors.push((ln, f, c));
            }
            other => return Err(parse_err(ln, format!("unknown or repeated line kind {other:?}"))),
        }
    }
    let sigma = sigma.ok_or_else(|| parse_err(0, "missing `sigma` line"))?;
    let alpha = alpha.ok_or_else(|| parse_err(0, "missing `alpha` line"))?;
    let map = CombinatorialMap::new(sigma, alpha)?;
    if colors.is_empty() {
        return Ok((map, None));
    }
    let mut out: Vec<Option<FaceColor>> = vec![None; map.face_count()];
    for (ln, f, c) in colors {
        if f >= map.face_count() {
            return Err(parse_err(ln, format!("face index {f} out of range 0..{}", map.face_count())));
        }
        if out[f].replace(c).is_some() {
            return Err(parse_err(ln, format!("face {f} colored twice")));
        }
    }
    let full: Option<Vec<FaceColor>> = out.into_iter().collect();
    let full = full.ok_or_else(|| MapError::Coloring("some faces have no color".into()))?;
    Ok((map, Some(FaceColoring(full))))
}

/// Undirected graph without self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loops are not allowed");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            for &v in a.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.vertex_count();
        let mut side = vec![u8::MAX; n];
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// An exact proper 3-coloring by backtracking, if one exists.
    pub fn three_coloring(&self) -> Option<Vec<u8>> {
        let n = self.vertex_count();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut color = vec![u8::MAX; n];
        if self.color_from(&order, 0, &mut color) {
            Some(color)
        } else {
            None
        }
    }

    fn color_from(&self, order: &[usize], at: usize, color: &mut [u8]) -> bool {
        let Some(&u) = order.get(at) else {
            return true;
        };
        let mut used = [false; 3];
        for v in self.neighbors(u) {
            if color[v] != u8::MAX {
                used[color[v] as usize] = true;
            }
        }
        let fresh = self.neighbors(u).all(|v| color[v] == u8::MAX);
        for c in 0..3u8 {
            if used[c as usize] {
                continue;
            }
            color[u] = c;
            if self.color_from(order, at + 1, color) {
                return true;
            }
            color[u] = u8::MAX;
            if fresh {
                // A vertex opening a new component: the other colors are symmetric.
                break;
            }
        }
        false
    }

    pub fn is_tripartite(&self) -> bool {
        self.three_coloring().is_some()
    }
}

/// Proper 3-coloring of the faces, colors given in order of first appearance by face id.
pub fn three_color_faces(map: &CombinatorialMap) -> Option<FaceColoring> {
    let g = map.dual_graph()?;
    let raw = g.three_coloring()?;
    let mut relabel = [u8::MAX; 3];
    let mut next = 0u8;
    let mut out = Vec::with_capacity(raw.len());
    for c in raw {
        if relabel[c as usize] == u8::MAX {
            relabel[c as usize] = next;
            next += 1;
        }
        out.push(FaceColor::from_index(relabel[c as usize] as usize));
    }
    Some(FaceColoring(out))
}

/// Colors faces by side count: `sizes[i]`-gons get color `i`.
pub fn color_by_size(map: &CombinatorialMap, sizes: [usize; 3]) -> Result<FaceColoring, MapError> {
    let mut out = Vec::with_capacity(map.face_count());
    for (f, s) in map.face_sizes().into_iter().enumerate() {
        let matches: Vec<usize> = (0..3).filter(|&i| sizes[i] == s).collect();
        match matches.as_slice() {
            [i] => out.push(FaceColor::from_index(*i)),
            [] => return Err(MapError::Coloring(format!("face {f} has {s} sides, not in {sizes:?}"))),
            _ => return Err(MapError::Coloring(format!("side count {s} is ambiguous in {sizes:?}"))),
        }
    }
    Ok(FaceColoring(out))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TessellationReport {
    /// (vertex, valence) for every vertex whose valence is not 3.
    pub non_trivalent: Vec<(usize, usize)>,
    /// Edges whose two sides carry the same color.
    pub improper_edges: Vec<usize>,
    pub coloring_size_mismatch: Option<(usize, usize)>,
}

impl TessellationReport {
    pub fn is_empty(&self) -> bool {
        self.non_trivalent.is_empty() && self.improper_edges.is_empty() && self.coloring_size_mismatch.is_none()
    }
}

pub fn check_trivalent_3colorable(map: &CombinatorialMap, coloring: &FaceColoring) -> TessellationReport {
    let mut rep = TessellationReport::default();
    for (v, val) in map.vertex_valences().into_iter().enumerate() {
        if val != 3 {
            rep.non_trivalent.push((v, val));
        }
    }
    if coloring.len() != map.face_count() {
        rep.coloring_size_mismatch = Some((coloring.len(), map.face_count()));
        return rep;
    }
    for e in 0..map.edge_count() {
        let [f, h] = map.edge_faces(e);
        if coloring.color(f) == coloring.color(h) {
            rep.improper_edges.push(e);
        }
    }
    rep
}

/// One vertex per red face; two red faces are joined when they both border a common blue face.
pub fn reduced_red_graph(map: &CombinatorialMap, coloring: &FaceColoring) -> SimpleGraph {
    let red = coloring.faces_of(FaceColor::R);
    let mut index = vec![usize::MAX; map.face_count()];
    for (i, &f) in red.iter().enumerate() {
        index[f] = i;
    }
    let mut g = SimpleGraph::new(red.len());
    for b in coloring.faces_of(FaceColor::B) {
        let mut around: BTreeSet<usize> = BTreeSet::new();
        for &d in map.face_darts(b) {
            let other = map.face_of(map.alpha(d));
            if coloring.color(other) == FaceColor::R {
                around.insert(index[other]);
            }
        }
        let around: Vec<usize> = around.into_iter().collect();
        for i in 0..around.len() {
            for j in i + 1..around.len() {
                g.add_edge(around[i], around[j]);
            }
        }
    }
    g
}

/// Lattice quotient Z^2 / L for a full-rank period lattice L, in Hermite form {(a,0),(b,c)}.
#[derive(Clone, Copy, Debug)]
struct LatticeQuotient {
    a: i64,
    b: i64,
    c: i64,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl LatticeQuotient {
    fn new(p1: (i64, i64), p2: (i64, i64)) -> Option<Self> {
        let det = p1.0 * p2.1 - p2.0 * p1.1;
        if det == 0 {
            return None;
        }
        let (g, s, t) = ext_gcd(p1.1, p2.1);
        let (mut wx, mut g) = (s * p1.0 + t * p2.0, g);
        if g < 0 {
            wx = -wx;
            g = -g;
        }
        let a = (det / g).abs();
        Some(LatticeQuotient { a, b: wx.rem_euclid(a), c: g })
    }

    fn count(&self) -> usize {
        (self.a * self.c) as usize
    }

    fn index(&self, x: i64, y: i64) -> usize {
        let k = y.div_euclid(self.c);
        let (x, y) = (x - k * self.b, y - k * self.c);
        (x.rem_euclid(self.a) + self.a * y) as usize
    }

    fn point(&self, idx: usize) -> (i64, i64) {
        let idx = idx as i64;
        (idx % self.a, idx / self.a)
    }
}

/// Honeycomb {6,3} on the torus Z^2 / <p1, p2>; one hexagon per lattice point.
pub fn honeycomb_torus(p1: (i64, i64), p2: (i64, i64)) -> Result<CombinatorialMap, MapError> {
    let q = LatticeQuotient::new(p1, p2).ok_or(MapError::DegeneratePeriods)?;
    let n = q.count();
    let dart = |x: i64, y: i64, t: usize, dir: usize| q.index(x, y) * 6 + t * 3 + dir;
    let mut sigma = vec![0; 6 * n];
    let mut alpha = vec![0; 6 * n];
    for idx in 0..n {
        let (i, j) = q.point(idx);
        for t in 0..2 {
            for dir in 0..3 {
                sigma[idx * 6 + t * 3 + dir] = idx * 6 + t * 3 + (dir + 1) % 3;
            }
        }
        for (a, b) in [
            (dart(i, j, 0, 0), dart(i + 1, j - 1, 1, 1)),
            (dart(i, j, 0, 1), dart(i, j, 1, 2)),
            (dart(i, j, 0, 2), dart(i, j - 1, 1, 0)),
        ] {
            alpha[a] = b;
            alpha[b] = a;
        }
    }
    CombinatorialMap::new(sigma, alpha)
}

/// Square lattice {4,4} torus with m x n vertices.
pub fn square_torus(m: usize, n: usize) -> Result<CombinatorialMap, MapError> {
    if m == 0 || n == 0 {
        return Err(MapError::DegeneratePeriods);
    }
    let v = |i: usize, j: usize| (j % n) * m + (i % m);
    let mut sigma = vec![0; 4 * m * n];
    let mut alpha = vec![0; 4 * m * n];
    for j in 0..n {
        for i in 0..m {
            let base = 4 * v(i, j);
            for dir in 0..4 {
                sigma[base + dir] = base + (dir + 1) % 4;
            }
            let east = base;
            let west = 4 * v(i + 1, j) + 2;
            alpha[east] = west;
            alpha[west] = east;
            let north = base + 1;
            let south = 4 * v(i, j + 1) + 3;
            alpha[north] = south;
            alpha[south] = north;
        }
    }
    CombinatorialMap::new(sigma, alpha)
}

/// Toroidal instances of the hexagonal tiling {6,6,6} and of the 4.6.12 tiling under any
/// assignment of its side counts to the colors R, G, B (`class` lists the side counts of
/// the R, G and B faces).
///
/// The {6,6,6} cell holds three hexagons (the smallest 3-colorable one); the 4.6.12 cell
/// holds one dodecagon, two hexagons and three squares.
pub fn torus_tessellation(class: [usize; 3], m: usize, n: usize) -> Result<(CombinatorialMap, FaceColoring), MapError> {
    if m == 0 || n == 0 {
        return Err(MapError::DegeneratePeriods);
    }
    let (m, n) = (m as i64, n as i64);
    if class == [6, 6, 6] {
        let map = honeycomb_torus((m, m), (-n, 2 * n))?;
        let col = three_color_faces(&map).ok_or(MapError::NotColorable)?;
        return Ok((map, col));
    }
    let mut sorted = class;
    sorted.sort_unstable();
    if sorted == [4, 6, 12] {
        let hex = honeycomb_torus((m, 0), (0, n))?;
        let (map, _, _) = hex.inflate_trivalent();
        let col = color_by_size(&map, class)?;
        return Ok((map, col));
    }
    Err(MapError::UnsupportedClass(class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(m: &CombinatorialMap) -> (usize, usize, usize) {
        (m.vertex_count(), m.edge_count(), m.face_count())
    }

    fn size_multiset(m: &CombinatorialMap) -> Vec<(usize, usize)> {
        let mut sizes = m.face_sizes();
        sizes.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for s in sizes {
            match out.last_mut() {
                Some((x, c)) if *x == s => *c += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    #[test]
    fn two_dart_loop_is_a_sphere() {
        // A single loop: one vertex, one edge, two faces. Every valid map has even chi.
        let m = CombinatorialMap::new(vec![1, 0], vec![1, 0]).unwrap();
        assert_eq!(counts(&m), (1, 1, 2));
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(check_euler(1), Err(MapError::OddEuler(1)));
    }

    #[test]
    fn theta_graph_on_sphere() {
        let m = CombinatorialMap::new(vec![1, 2, 0, 5, 3, 4], vec![3, 4, 5, 0, 1, 2]).unwrap();
        assert_eq!(counts(&m), (2, 3, 3));
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn distinct_load_errors() {
        let bad_sigma = "tessmap 1\ndarts 2\nsigma 0 0\nalpha 1 0\n";
        assert!(matches!(load_map(bad_sigma), Err(MapError::MalformedPermutation { name: "sigma", .. })));
        let fixed = "tessmap 1\ndarts 2\nsigma 0 1\nalpha 0 1\n";
        assert_eq!(load_map(fixed).unwrap_err(), MapError::AlphaFixedPoint(0));
        let disc = "tessmap 1\ndarts 4\nsigma 0 1 2 3\nalpha 1 0 3 2\n";
        assert_eq!(load_map(disc).unwrap_err(), MapError::Disconnected(2));
        let unknown = "tessmap 1\ndarts 2\nsigma 0 1\nalpha 1 0\nbogus 1\n";
        assert!(matches!(load_map(unknown), Err(MapError::Parse { line: 5, .. })));
        let range = "tessmap 1\ndarts 2\nsigma 0 2\nalpha 1 0\n";
        assert!(matches!(load_map(range), Err(MapError::Parse { line: 3, .. })));
        let odd = "tessmap 1\ndarts 3\nsigma 0 1 2\nalpha 1 0 2\n";
        assert!(matches!(load_map(odd), Err(MapError::Parse { line: 2, .. })));
        let not_inv = "tessmap 1\ndarts 4\nsigma 1 2 3 0\nalpha 1 2 3 0\n";
        assert_eq!(load_map(not_inv).unwrap_err(), MapError::AlphaNotInvolution(0));
    }

    #[test]
    fn honeycomb_666_two_by_two() {
        let (m, col) = torus_tessellation([6, 6, 6], 2, 2).unwrap();
        assert_eq!(m.euler_characteristic(), 0);
        assert!(m.face_sizes().iter().all(|&s| s == 6));
        assert!(m.vertex_valences().iter().all(|&v| v == 3));
        assert_eq!(counts(&m), (24, 36, 12));
        assert!(check_trivalent_3colorable(&m, &col).is_empty());
    }

    #[test]
    fn honeycomb_666_smallest() {
        let (m, col) = torus_tessellation([6, 6, 6], 1, 1).unwrap();
        assert_eq!(counts(&m), (6, 9, 3));
        assert_eq!(m.vertex_count(), 2 * m.face_count());
        assert_eq!(m.euler_characteristic(), 0);
        assert!(check_trivalent_3colorable(&m, &col).is_empty());
    }

    #[test]
    fn round_trip_serialization() {
        let (m, col) = torus_tessellation([6, 6, 6], 2, 2).unwrap();
        let text = m.serialize(Some(&col));
        let (m2, col2) = load_map(&text).unwrap();
        assert_eq!(m2.sigma_perm(), m.sigma_perm());
        assert_eq!(m2.alpha_perm(), m.alpha_perm());
        assert_eq!(col2.as_ref(), Some(&col));
        assert_eq!(m2.serialize(col2.as_ref()), text);
    }

    #[test]
    fn dual_of_honeycomb() {
        let (m, _) = torus_tessellation([6, 6, 6], 2, 2).unwrap();
        let d = m.dual();
        assert!(d.face_sizes().iter().all(|&s| s == 3));
        assert!(d.vertex_valences().iter().all(|&v| v == 6));
        assert_eq!(d.euler_characteristic(), 0);
        assert!(d.dual().is_isomorphic(&m));
    }

    #[test]
    fn medial_counts() {
        let (m, _) = torus_tessellation([6, 6, 6], 2, 2).unwrap();
        let med = m.medial();
        assert_eq!(med.vertex_count(), m.edge_count());
        assert_eq!(med.vertex_count(), 36);
        assert!(med.vertex_valences().iter().all(|&v| v == 4));
        assert_eq!(med.euler_characteristic(), 0);
        assert_eq!(med.face_count(), m.vertex_count() + m.face_count());
    }

    #[test]
    fn medial_faces_match_vertices_and_faces() {
        let sq = square_torus(3, 2).unwrap();
        let med = sq.medial();
        let mut expect: Vec<usize> = sq.face_sizes();
        expect.extend(sq.vertex_valences());
        expect.sort_unstable();
        let mut got = med.face_sizes();
        got.sort_unstable();
        assert_eq!(got, expect);
    }

    #[test]
    fn truncation_counts() {
        let sq = square_torus(2, 2).unwrap();
        let t = sq.truncate();
        assert!(t.vertex_valences().iter().all(|&v| v == 3));
        assert_eq!(t.vertex_count(), sq.dart_count());
        assert_eq!(size_multiset(&t), vec![(4, 4), (8, 4)]);
    }

    #[test]
    fn tessellation_4_6_12() {
        let (m, col) = torus_tessellation([6, 12, 4], 2, 2).unwrap();
        assert_eq!(size_multiset(&m), vec![(4, 12), (6, 8), (12, 4)]);
        assert_eq!(counts(&m), (48, 72, 24));
        assert_eq!(col.faces_of(FaceColor::R).len(), 8);
        assert_eq!(col.faces_of(FaceColor::G).len(), 4);
        assert_eq!(col.faces_of(FaceColor::B).len(), 12);
        assert!(check_trivalent_3colorable(&m, &col).is_empty());
        let (m2, col2) = torus_tessellation([12, 4, 6], 2, 2).unwrap();
        assert_eq!(counts(&m2), (48, 72, 24));
        assert_eq!(col2.faces_of(FaceColor::R).len(), 4);
        assert_eq!(col2.faces_of(FaceColor::G).len(), 12);
        assert_eq!(col2.faces_of(FaceColor::B).len(), 8);
        let (cell, _) = torus_tessellation([12, 4, 6], 1, 1).unwrap();
        assert_eq!(size_multiset(&cell), vec![(4, 3), (6, 2), (12, 1)]);
        assert_eq!((cell.vertex_count(), cell.edge_count()), (12, 18));
    }

    #[test]
    fn unsupported_class() {
        assert_eq!(torus_tessellation([8, 8, 4], 1, 1).unwrap_err(), MapError::UnsupportedClass([8, 8, 4]));
    }

    #[test]
    fn inflation_of_square_torus() {
        let sq = square_torus(2, 2).unwrap();
        let (inf, col, origin) = sq.inflate_trivalent();
        assert!(check_trivalent_3colorable(&inf, &col).is_empty());
        assert_eq!(inf.euler_characteristic(), 0);
        // four darts per input edge, one inflated vertex per medial dart
        assert_eq!(inf.vertex_count(), 4 * sq.edge_count());
        for (f, o) in origin.iter().enumerate() {
            let size = inf.face_sizes()[f];
            match *o {
                InflatedFace::Vertex(v) => assert_eq!(size, 2 * sq.vertex_valences()[v]),
                InflatedFace::Edge(_) => assert_eq!(size, 4),
                InflatedFace::Face(g) => assert_eq!(size, 2 * sq.face_sizes()[g]),
            }
        }
        // a valence-4 vertex gives an 8-sided v-face
        assert_eq!(size_multiset(&inf), vec![(4, 8), (8, 8)]);
    }

    #[test]
    fn square_torus_violations() {
        let sq = square_torus(3, 3).unwrap();
        let col = FaceColoring(vec![FaceColor::R; sq.face_count()]);
        let rep = check_trivalent_3colorable(&sq, &col);
        assert_eq!(rep.non_trivalent.len(), sq.vertex_count());
        assert!(rep.non_trivalent.iter().all(|&(_, v)| v == 4));
    }

    #[test]
    fn forced_same_color_is_reported() {
        let (m, mut col) = torus_tessellation([6, 6, 6], 2, 2).unwrap();
        let [f, h] = m.edge_faces(0);
        col.0[h] = col.0[f];
        let rep = check_trivalent_3colorable(&m, &col);
        assert!(rep.improper_edges.contains(&0));
    }

    #[test]
    fn reduced_red_graph_12_4_6() {
        let (m, col) = torus_tessellation([12, 4, 6], 2, 2).unwrap();
        let g = reduced_red_graph(&m, &col);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert!(!g.is_tripartite());
    }

    #[test]
    fn small_graphs() {
        let c6 = SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert!(c6.is_bipartite());
        assert!(c6.is_tripartite());
        let k3 = SimpleGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(k3.is_tripartite());
        assert!(!k3.is_bipartite());
    }

    proptest! {
        #[test]
        fn torus_counts_scale(m in 1usize..4, n in 1usize..4, which in 0usize..3) {
            let class = [[6, 6, 6], [6, 12, 4], [12, 4, 6]][which];
            let (base, _) = torus_tessellation(class, 1, 1).unwrap();
            let (t, col) = torus_tessellation(class, m, n).unwrap();
            let k = m * n;
            prop_assert_eq!(counts(&t), (k * base.vertex_count(), k * base.edge_count(), k * base.face_count()));
            prop_assert!(check_trivalent_3colorable(&t, &col).is_empty());
        }

        #[test]
        fn transforms_preserve_chi(m in 1usize..4, n in 1usize..4) {
            let sq = square_torus(m, n).unwrap();
            let (hex, _) = torus_tessellation([6, 6, 6], m, n).unwrap();
            for map in [sq, hex] {
                let chi = map.euler_characteristic();
                prop_assert_eq!(map.dual().euler_characteristic(), chi);
                prop_assert_eq!(map.medial().euler_characteristic(), chi);
                let (inf, col, _) = map.inflate_trivalent();
                prop_assert_eq!(inf.euler_characteristic(), chi);
                prop_assert!(check_trivalent_3colorable(&inf, &col).is_empty());
                let (back, _) = load_map(&map.serialize(None)).unwrap();
                prop_assert!(back.is_isomorphic(&map));
            }
        }
    }
}
