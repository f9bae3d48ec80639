//! Trivalent hypergraphs with rank-2 links and rank-3 triangles, their validation,
//! text format, face registry and the inner-triangle placement solver.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::gf2::Bits;
use crate::surface_map::FaceColor;

/// A rank-2 edge carrying a color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub ends: [usize; 2],
    pub color: FaceColor,
}

/// (vertex count, edge ends, face edge lists) of a surface graph.
pub type Surface = (usize, Vec<[usize; 2]>, Vec<Vec<usize>>);

/// The surface a hypergraph was drawn on, with each hyperedge's image on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vertex_count: usize,
    pub edge_ends: Vec<[usize; 2]>,
    /// Each face as its list of edge ids.
    pub faces: Vec<Vec<usize>>,
    /// Per hyperedge, the surface edge it projects to, if any.
    pub shadow: Vec<Option<usize>>,
}

impl Embedding {
    pub fn edge_count(&self) -> usize {
        self.edge_ends.len()
    }

    /// Surface chain of a hyperedge set.
    pub fn project(&self, edges: &Bits) -> Bits {
        let mut out = Bits::zeros(self.edge_count());
        for i in edges.iter_ones() {
            if let Some(e) = self.shadow[i] {
                out.flip(e);
            }
        }
        out
    }

    /// True when every surface vertex meets the chain an even number of times.
    pub fn is_cycle(&self, chain: &Bits) -> bool {
        let mut deg = vec![0u8; self.vertex_count];
        for e in chain.iter_ones() {
            let [a, b] = self.edge_ends[e];
            deg[a] ^= 1;
            deg[b] ^= 1;
        }
        deg.iter().all(|&d| d == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub vertex_count: usize,
    pub rank2: Vec<Link>,
    pub rank3: Vec<[usize; 3]>,
    pub construction: String,
    pub source: String,
    pub embedding: Option<Embedding>,
}

/// A borrowed view of one hyperedge by global index (links first, then triangles).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeView<'a> {
    Link(&'a Link),
    Triangle(&'a [usize; 3]),
}

impl<'a> EdgeView<'a> {
    pub fn support(self) -> &'a [usize] {
        match self {
            EdgeView::Link(l) => &l.ends,
            EdgeView::Triangle(t) => &t[..],
        }
    }

    /// Link color, with triangles counted as blue.
    pub fn color(self) -> FaceColor {
        match self {
            EdgeView::Link(l) => l.color,
            EdgeView::Triangle(_) => FaceColor::B,
        }
    }

    pub fn rank(self) -> usize {
        self.support().len()
    }
}

impl Hypergraph {
    pub fn edge_count(&self) -> usize {
        self.rank2.len() + self.rank3.len()
    }

    pub fn edge(&self, i: usize) -> EdgeView<'_> {
        if i < self.rank2.len() {
            EdgeView::Link(&self.rank2[i])
        } else {
            EdgeView::Triangle(&self.rank3[i - self.rank2.len()])
        }
    }

    pub fn is_triangle(&self, i: usize) -> bool {
        i >= self.rank2.len()
    }

    pub fn triangle_index(&self, j: usize) -> usize {
        self.rank2.len() + j
    }

    /// Edge ids at each vertex (out-of-range vertices are skipped).
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for i in 0..self.edge_count() {
            for &v in self.edge(i).support() {
                if v < self.vertex_count {
                    inc[v].push(i);
                }
            }
        }
        inc
    }

    /// True when every vertex meets the edge set an even number of times.
    pub fn is_hypercycle(&self, edges: &Bits) -> bool {
        let mut deg = vec![0u8; self.vertex_count];
        for i in edges.iter_ones() {
            for &v in self.edge(i).support() {
                deg[v] ^= 1;
            }
        }
        deg.iter().all(|&d| d == 0)
    }

    pub fn edge_set<I: IntoIterator<Item = usize>>(&self, idx: I) -> Bits {
        Bits::from_indices(self.edge_count(), idx)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_hypergraph(self)
    }

    /// Line-oriented text form; the registry, when given, is appended as `cycle` blocks.
    pub fn serialize(&self, registry: Option<&FaceRegistry>) -> String {
        let mut s = String::new();
        s.push_str(&format!("qubits {}\n", self.vertex_count));
        if !self.construction.is_empty() {
            s.push_str(&format!("construction {}\n", self.construction));
        }
        if !self.source.is_empty() {
            s.push_str(&format!("source {}\n", self.source));
        }
        for l in &self.rank2 {
            s.push_str(&format!("e2 {} {} {}\n", l.ends[0], l.ends[1], l.color));
        }
        for t in &self.rank3 {
            s.push_str(&format!("e3 {} {} {}\n", t[0], t[1], t[2]));
        }
        if let Some(emb) = &self.embedding {
            s.push_str(&format!("surface {}\n", emb.vertex_count));
            for [a, b] in &emb.edge_ends {
                s.push_str(&format!("sedge {a} {b}\n"));
            }
            for f in &emb.faces {
                s.push_str(&format!("sface {}\n", join(f)));
            }
            for (i, sh) in emb.shadow.iter().enumerate() {
                if let Some(e) = sh {
                    s.push_str(&format!("shadow {i} {e}\n"));
                }
            }
        }
        if let Some(reg) = registry {
            for (face, cyc) in &reg.fprime {
                s.push_str(&format!("fprime {} {}\n", face, join(cyc)));
            }
            for it in &reg.inner {
                s.push_str(&format!("inner {} {} {} {}\n", it.face, it.slots[0], it.slots[1], it.slots[2]));
            }
            for c in &reg.cycles {
                s.push_str(&format!("cycle {} {}\n", c.tag(), join(&c.edges)));
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<(Hypergraph, FaceRegistry), ParseError> {
        parse_hypergraph(text)
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn parse_hypergraph(text: &str) -> Result<(Hypergraph, FaceRegistry), ParseError> {
    let mut h = Hypergraph {
        vertex_count: 0,
        rank2: Vec::new(),
        rank3: Vec::new(),
        construction: String::new(),
        source: String::new(),
        embedding: None,
    };
    let mut reg = FaceRegistry::default();
    let mut seen_qubits = false;
    let mut shadows: Vec<(usize, usize)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let err = |msg: String| ParseError { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let key = it.next().unwrap_or("");
        let rest: Vec<&str> = it.collect();
        let nums = |xs: &[&str]| -> Result<Vec<usize>, ParseError> {
            xs.iter()
                .map(|x| x.parse::<usize>().map_err(|_| err(format!("expected an integer, got {x:?}"))))
                .collect()
        };
        match key {
            "qubits" => {
                let v = nums(&rest)?;
                if v.len() != 1 {
                    return Err(err("qubits takes one integer".into()));
                }
                h.vertex_count = v[0];
                seen_qubits = true;
            }
            "construction" => h.construction = rest.join(" "),
            "source" => h.source = rest.join(" "),
            "e2" => {
                if rest.len() != 3 {
                    return Err(err("e2 takes two vertices and a color".into()));
                }
                let v = nums(&rest[..2])?;
                let color = rest[2].parse::<FaceColor>().map_err(|e| err(e.to_string()))?;
                h.rank2.push(Link { ends: [v[0], v[1]], color });
            }
            "e3" => {
                let v = nums(&rest)?;
                if v.len() != 3 {
                    return Err(err("e3 takes three vertices".into()));
                }
                h.rank3.push([v[0], v[1], v[2]]);
            }
            "surface" => {
                let v = nums(&rest)?;
                if v.len() != 1 {
                    return Err(err("surface takes one integer".into()));
                }
                h.embedding = Some(Embedding { vertex_count: v[0], edge_ends: Vec::new(), faces: Vec::new(), shadow: Vec::new() });
            }
            "sedge" | "sface" | "shadow" => {
                let v = nums(&rest)?;
                let emb = h.embedding.as_mut().ok_or_else(|| err(format!("{key} before surface")))?;
                match key {
                    "sedge" if v.len() == 2 => emb.edge_ends.push([v[0], v[1]]),
                    "sface" => emb.faces.push(v),
                    "shadow" if v.len() == 2 => shadows.push((v[0], v[1])),
                    _ => return Err(err(format!("malformed {key} line"))),
                }
            }
            "fprime" => {
                let v = nums(&rest)?;
                if v.is_empty() {
                    return Err(err("fprime needs a face id".into()));
                }
                reg.fprime.push((v[0], v[1..].to_vec()));
            }
            "inner" => {
                let v = nums(&rest)?;
                if v.len() != 4 {
                    return Err(err("inner takes a face id and three slots".into()));
                }
                reg.inner.push(InnerTriangle { face: v[0], slots: [v[1], v[2], v[3]] });
            }
            "cycle" => {
                let tag = rest.first().ok_or_else(|| err("cycle needs a tag".into()))?;
                let (color, face, kind) = parse_tag(tag).ok_or_else(|| err(format!("bad cycle tag {tag:?}")))?;
                let edges = nums(&rest[1..])?;
                reg.cycles.push(RegistryCycle { face, color, kind, edges });
            }
            _ => return Err(err(format!("unknown record {key:?}"))),
        }
    }
    if !seen_qubits {
        return Err(ParseError { line: 0, msg: "missing qubits line".into() });
    }
    let m = h.edge_count();
    for c in &reg.cycles {
        if let Some(&e) = c.edges.iter().find(|&&e| e >= m) {
            return Err(ParseError { line: 0, msg: format!("cycle {} names edge {e} of {m}", c.tag()) });
        }
    }
    if let Some(emb) = h.embedding.as_mut() {
        emb.shadow = vec![None; m];
        for (i, e) in shadows {
            if i >= m || e >= emb.edge_ends.len() {
                return Err(ParseError { line: 0, msg: format!("shadow {i} {e} out of range") });
            }
            emb.shadow[i] = Some(e);
        }
    }
    Ok((h, reg))
}

/// Itemized (H1)-(H5) outcome; each list holds the witnesses of a failure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// (H1) edges with a repeated or out-of-range vertex.
    pub h1: Vec<usize>,
    /// (H2) (vertex, degree) with degree not 3.
    pub h2: Vec<(usize, usize)>,
    /// (H3) edge pairs sharing two or more vertices.
    pub h3: Vec<(usize, usize)>,
    /// (H4) triangle pairs sharing a vertex.
    pub h4: Vec<(usize, usize)>,
    /// (H5) (vertex, edge, edge) where two same-colored edges meet.
    pub h5: Vec<(usize, usize, usize)>,
    /// When (H5) fails: whether some other proper coloring exists (None if the search gave up).
    pub recolorable: Option<bool>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.h1.is_empty() && self.h2.is_empty() && self.h3.is_empty() && self.h4.is_empty() && self.h5.is_empty()
    }

    pub fn passes_h1_to_h4(&self) -> bool {
        self.h1.is_empty() && self.h2.is_empty() && self.h3.is_empty() && self.h4.is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        fn status<T: fmt::Debug>(name: &str, what: &str, w: &[T]) -> String {
            if w.is_empty() {
                format!("{name} pass")
            } else {
                let shown: Vec<String> = w.iter().take(5).map(|x| format!("{x:?}")).collect();
                format!("{name} FAIL {} {what}: {}", w.len(), shown.join(" "))
            }
        }
        let mut out = vec![
            status("H1", "degenerate edges", &self.h1),
            status("H2", "vertices of degree != 3", &self.h2),
            status("H3", "edge pairs sharing >1 vertex", &self.h3),
            status("H4", "intersecting triangle pairs", &self.h4),
            status("H5", "same-colored meetings", &self.h5),
        ];
        if !self.h5.is_empty() {
            out.push(match self.recolorable {
                Some(true) => "H5 note: a proper recoloring exists".to_string(),
                Some(false) => "H5 note: no proper 3-edge-coloring exists".to_string(),
                None => "H5 note: recoloring search exhausted its budget".to_string(),
            });
        }
        out
    }
}

pub fn validate_hypergraph(h: &Hypergraph) -> ValidationReport {
    let mut rep = ValidationReport::default();
    for i in 0..h.edge_count() {
        let s = h.edge(i).support();
        let distinct: BTreeSet<usize> = s.iter().copied().collect();
        if distinct.len() != s.len() || s.iter().any(|&v| v >= h.vertex_count) {
            rep.h1.push(i);
        }
    }
    let inc = h.incidence();
    for (v, es) in inc.iter().enumerate() {
        if es.len() != 3 {
            rep.h2.push((v, es.len()));
        }
    }
    let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for es in &inc {
        let uniq: BTreeSet<usize> = es.iter().copied().collect();
        let uniq: Vec<usize> = uniq.into_iter().collect();
        for a in 0..uniq.len() {
            for b in a + 1..uniq.len() {
                *shared.entry((uniq[a], uniq[b])).or_insert(0) += 1;
            }
        }
    }
    for (&(a, b), &c) in &shared {
        if c >= 2 {
            rep.h3.push((a, b));
        }
        if c >= 1 && h.is_triangle(a) && h.is_triangle(b) {
            rep.h4.push((a, b));
        }
    }
    for (v, es) in inc.iter().enumerate() {
        for a in 0..es.len() {
            for b in a + 1..es.len() {
                if es[a] != es[b] && h.edge(es[a]).color() == h.edge(es[b]).color() {
                    rep.h5.push((v, es[a], es[b]));
                }
            }
        }
    }
    if !rep.h5.is_empty() {
        rep.recolorable = search_edge_coloring(h, &inc, 1_000_000);
    }
    rep
}

/// Backtracking search for a proper coloring with triangles fixed blue.
fn search_edge_coloring(h: &Hypergraph, inc: &[Vec<usize>], budget: usize) -> Option<bool> {
    let m = h.edge_count();
    let mut color: Vec<Option<FaceColor>> = (0..m).map(|i| h.is_triangle(i).then_some(FaceColor::B)).collect();
    let order: Vec<usize> = (0..h.rank2.len()).collect();
    let mut nodes = 0usize;
    fn ok(h: &Hypergraph, inc: &[Vec<usize>], color: &[Option<FaceColor>], e: usize, c: FaceColor) -> bool {
        h.edge(e).support().iter().all(|&v| inc[v].iter().all(|&o| o == e || color[o] != Some(c)))
    }
    fn rec(
        h: &Hypergraph,
        inc: &[Vec<usize>],
        color: &mut Vec<Option<FaceColor>>,
        order: &[usize],
        i: usize,
        nodes: &mut usize,
        budget: usize,
    ) -> Option<bool> {
        if i == order.len() {
            return Some(true);
        }
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let e = order[i];
        for c in FaceColor::ALL {
            if ok(h, inc, color, e, c) {
                color[e] = Some(c);
                match rec(h, inc, color, order, i + 1, nodes, budget) {
                    Some(false) => {}
                    other => return other,
                }
                color[e] = None;
            }
        }
        Some(false)
    }
    rec(h, inc, &mut color, &order, 0, &mut nodes, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleKind {
    Sigma1,
    Sigma2,
    Sigma3,
    FBar,
}

impl CycleKind {
    fn suffix(self) -> &'static str {
        match self {
            CycleKind::Sigma1 => "s1",
            CycleKind::Sigma2 => "s2",
            CycleKind::Sigma3 => "s3",
            CycleKind::FBar => "fbar",
        }
    }
}

/// A registered stabilizer hypercycle attached to a source face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryCycle {
    pub face: usize,
    pub color: FaceColor,
    pub kind: CycleKind,
    /// Sorted global edge ids.
    pub edges: Vec<usize>,
}

impl RegistryCycle {
    /// `R12.s1`, `G3.s2`, `R0.fbar`, ...
    pub fn tag(&self) -> String {
        format!("{}{}.{}", self.color, self.face, self.kind.suffix())
    }
}

fn parse_tag(tag: &str) -> Option<(FaceColor, usize, CycleKind)> {
    let (head, kind) = tag.split_once('.')?;
    let color = head.get(..1)?.parse::<FaceColor>().ok()?;
    let face = head.get(1..)?.parse::<usize>().ok()?;
    let kind = match kind {
        "s1" => CycleKind::Sigma1,
        "s2" => CycleKind::Sigma2,
        "s3" => CycleKind::Sigma3,
        "fbar" => CycleKind::FBar,
        _ => return None,
    };
    Some((color, face, kind))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InnerTriangle {
    pub face: usize,
    /// The three subdivided positions of the inserted cycle.
    pub slots: [usize; 3],
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaceRegistry {
    pub cycles: Vec<RegistryCycle>,
    /// Per selected face, the vertex cycle of the inserted face.
    pub fprime: Vec<(usize, Vec<usize>)>,
    pub inner: Vec<InnerTriangle>,
}

impl FaceRegistry {
    pub fn find(&self, color: FaceColor, face: usize, kind: CycleKind) -> Option<&RegistryCycle> {
        self.cycles.iter().find(|c| c.color == color && c.face == face && c.kind == kind)
    }

    pub fn of_kind(&self, color: FaceColor, kind: CycleKind) -> impl Iterator<Item = &RegistryCycle> {
        self.cycles.iter().filter(move |c| c.color == color && c.kind == kind)
    }
}

/// One face of a placement problem: `slots[j]` lists the constraints that gain a vertex
/// when position `j` is subdivided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementFace {
    pub face: usize,
    pub slots: Vec<Vec<usize>>,
}

/// A hypercycle that must gain an even number of new vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementConstraint {
    pub tag: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlacementProblem {
    pub faces: Vec<PlacementFace>,
    pub constraints: Vec<PlacementConstraint>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlacementError {
    #[error("face {face} offers {slots} positions, fewer than 3")]
    TooFewSlots { face: usize, slots: usize },
    #[error("no placement keeps every cycle even; unsatisfiable: {}", cycles.join(" "))]
    Infeasible { cycles: Vec<String> },
}

impl PlacementProblem {
    /// Per-constraint added-vertex counts of an assignment.
    pub fn added_counts(&self, choice: &[[usize; 3]]) -> Vec<usize> {
        let mut cnt = vec![0usize; self.constraints.len()];
        for (f, ch) in self.faces.iter().zip(choice) {
            for &j in ch {
                for &c in &f.slots[j] {
                    cnt[c] += 1;
                }
            }
        }
        cnt
    }
}

fn three_subsets(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// One 3-subset per face such that every constraint gains an even number of vertices.
/// Faces are taken in order and subsets lexicographically; subsets with the same parity
/// effect as an earlier one are skipped, and failed (face, parity) states are memoized.
pub fn place_inner_triangles(problem: &PlacementProblem) -> Result<Vec<[usize; 3]>, PlacementError> {
    let nc = problem.constraints.len();
    for f in &problem.faces {
        if f.slots.len() < 3 {
            return Err(PlacementError::TooFewSlots { face: f.face, slots: f.slots.len() });
        }
    }
    let mut last_face = vec![None::<usize>; nc];
    for (i, f) in problem.faces.iter().enumerate() {
        for s in &f.slots {
            for &c in s {
                last_face[c] = Some(i);
            }
        }
    }
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); problem.faces.len()];
    let mut unconstrained_bad = Vec::new();
    for (c, lf) in last_face.iter().enumerate() {
        match lf {
            Some(i) => closes[*i].push(c),
            None => unconstrained_bad.push(c),
        }
    }
    // per face: distinct parity effects in lexicographic order of first subset
    let options: Vec<Vec<([usize; 3], Bits)>> = problem
        .faces
        .iter()
        .map(|f| {
            let mut seen: HashSet<Bits> = HashSet::new();
            let mut opts = Vec::new();
            for sub in three_subsets(f.slots.len()) {
                let mut eff = Bits::zeros(nc);
                for &j in &sub {
                    for &c in &f.slots[j] {
                        eff.flip(c);
                    }
                }
                if seen.insert(eff.clone()) {
                    opts.push((sub, eff));
                }
            }
            opts
        })
        .collect();

    struct Search<'a> {
        options: &'a [Vec<([usize; 3], Bits)>],
        closes: &'a [Vec<usize>],
        failed: HashSet<(usize, Bits)>,
        blamed: BTreeSet<usize>,
        choice: Vec<[usize; 3]>,
    }
    impl Search<'_> {
        fn run(&mut self, i: usize, parity: &Bits) -> bool {
            if i == self.options.len() {
                return true;
            }
            if self.failed.contains(&(i, parity.clone())) {
                return false;
            }
            for k in 0..self.options[i].len() {
                let (sub, eff) = &self.options[i][k];
                let next = parity.xor(eff);
                if let Some(&bad) = self.closes[i].iter().find(|&&c| next.get(c)) {
                    self.blamed.insert(bad);
                    continue;
                }
                self.choice.push(*sub);
                if self.run(i + 1, &next) {
                    return true;
                }
                self.choice.pop();
            }
            self.failed.insert((i, parity.clone()));
            false
        }
    }
    let mut s = Search { options: &options, closes: &closes, failed: HashSet::new(), blamed: BTreeSet::new(), choice: Vec::new() };
    if s.run(0, &Bits::zeros(nc)) {
        Ok(s.choice)
    } else {
        Err(PlacementError::Infeasible { cycles: s.blamed.iter().map(|&c| problem.constraints[c].tag.clone()).collect() })
    }
}

/// Builder-side edge handle, resolved to a global id once all links are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum ERef {
    L(usize),
    T(usize),
}

/// Hypergraph under construction.
#[derive(Debug, Default)]
pub(crate) struct Draft {
    pub n: usize,
    pub links: Vec<(Link, Option<usize>)>,
    pub tris: Vec<([usize; 3], Option<usize>)>,
}

impl Draft {
    pub fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn link(&mut self, u: usize, v: usize, color: FaceColor, shadow: Option<usize>) -> ERef {
        self.links.push((Link { ends: [u, v], color }, shadow));
        ERef::L(self.links.len() - 1)
    }

    pub fn tri(&mut self, t: [usize; 3], shadow: Option<usize>) -> ERef {
        self.tris.push((t, shadow));
        ERef::T(self.tris.len() - 1)
    }

    pub fn resolve(&self, r: ERef) -> usize {
        match r {
            ERef::L(i) => i,
            ERef::T(j) => self.links.len() + j,
        }
    }

    /// Symmetric-difference of the handles as sorted global ids.
    pub fn cycle(&self, refs: &[ERef]) -> Vec<usize> {
        let mut odd: BTreeSet<usize> = BTreeSet::new();
        for &r in refs {
            let g = self.resolve(r);
            if !odd.insert(g) {
                odd.remove(&g);
            }
        }
        odd.into_iter().collect()
    }

    pub fn finish(self, construction: &str, source: String, surface: Option<Surface>) -> Hypergraph {
        let shadow: Vec<Option<usize>> = self.links.iter().map(|x| x.1).chain(self.tris.iter().map(|x| x.1)).collect();
        Hypergraph {
            vertex_count: self.n,
            rank2: self.links.into_iter().map(|x| x.0).collect(),
            rank3: self.tris.into_iter().map(|x| x.0).collect(),
            construction: construction.to_string(),
            source,
            embedding: surface.map(|(v, edge_ends, faces)| Embedding { vertex_count: v, edge_ends, faces, shadow }),
        }
    }
}
