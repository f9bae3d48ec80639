//! Hypergraph constructions on colored maps: the Bombín baseline, even-face insertion,
//! and the four families with inner triangles.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::hypergraph::{
    place_inner_triangles, CycleKind, Draft, ERef, FaceRegistry, Hypergraph, InnerTriangle, PlacementConstraint,
    PlacementError, PlacementFace, PlacementProblem, RegistryCycle, Surface,
};
use crate::census::{
    params_bombin, params_family1_counts, params_family2_counts, params_family3_counts, params_family4_counts, CensusError,
    CodeParams, SemiRegularCounts,
};
use crate::surface_map::{check_trivalent_3colorable, reduced_red_graph, CombinatorialMap, FaceColor, FaceColoring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("input is not a trivalent properly 3-colored tessellation: {0}")]
    InvalidInput(String),
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("face {face} has {size} sides: {reason}")]
    FaceSize { face: usize, size: usize, reason: String },
    #[error(transparent)]
    Placement(#[from] PlacementError),
}

/// `map V=.. E=.. F=.. chi=..`, followed by `R=.. G=.. B=.. redtri=0|1` for colored maps.
fn describe(map: &CombinatorialMap, col: Option<&FaceColoring>) -> String {
    let mut s = format!(
        "map V={} E={} F={} chi={}",
        map.vertex_count(),
        map.edge_count(),
        map.face_count(),
        map.euler_characteristic()
    );
    if let Some(col) = col {
        let n = |c| col.faces_of(c).len();
        let tri = reduced_red_graph(map, col).is_tripartite() as u8;
        s.push_str(&format!(" R={} G={} B={} redtri={tri}", n(FaceColor::R), n(FaceColor::G), n(FaceColor::B)));
    }
    s
}

/// Closed-form parameters for a build, read from its `source` line. None when the
/// construction has no closed form or the line lacks the needed counts.
pub fn closed_form(h: &Hypergraph) -> Option<Result<CodeParams, CensusError>> {
    let kv: HashMap<&str, i64> = h
        .source
        .split_whitespace()
        .filter_map(|t| t.split_once('='))
        .filter_map(|(k, v)| Some((k, v.parse().ok()?)))
        .collect();
    let get = |k: &str| kv.get(k).copied();
    let (v, e, f, chi) = (get("V")?, get("E")?, get("F")?, get("chi")?);
    let counts = || -> Option<SemiRegularCounts> {
        let (f_r, f_g, f_b) = (get("R")?, get("G")?, get("B")?);
        Some(SemiRegularCounts { n_f: f, n_e: e, n_v: v, f_r, f_g, f_b, chi, genus: (2 - chi) / 2 })
    };
    Some(match h.construction.as_str() {
        "family1" => params_family1_counts(&counts()?),
        "family2" => params_family2_counts(&counts()?, get("redtri")? == 1),
        "family3" => params_family3_counts(&counts()?),
        "family4" => params_family4_counts(2 * e / f, f, v),
        "bombin" => params_bombin(f, v, chi),
        _ => return None,
    })
}

fn surface(map: &CombinatorialMap) -> Surface {
    (map.vertex_count(), (0..map.edge_count()).map(|e| map.edge_ends(e)).collect(), map.face_edges())
}

fn check_input(map: &CombinatorialMap, col: &FaceColoring) -> Result<(), BuildError> {
    let rep = check_trivalent_3colorable(map, col);
    if rep.is_empty() {
        return Ok(());
    }
    let mut parts = Vec::new();
    if let Some(&(v, val)) = rep.non_trivalent.first() {
        parts.push(format!("vertex {v} has valence {val}"));
    }
    if let Some(&e) = rep.improper_edges.first() {
        parts.push(format!("edge {e} has one color on both sides"));
    }
    if let Some((a, b)) = rep.coloring_size_mismatch {
        parts.push(format!("{a} colors for {b} faces"));
    }
    Err(BuildError::InvalidInput(parts.join("; ")))
}

/// Common side count of the faces of one color.
fn uniform_size(map: &CombinatorialMap, col: &FaceColoring, c: FaceColor) -> Result<usize, BuildError> {
    let faces = col.faces_of(c);
    let first = *faces.first().ok_or_else(|| BuildError::ClassMismatch(format!("no {c} faces")))?;
    let size = map.face_darts(first).len();
    if let Some(&f) = faces.iter().find(|&&f| map.face_darts(f).len() != size) {
        return Err(BuildError::ClassMismatch(format!(
            "{c} faces {first} and {f} have {size} and {} sides",
            map.face_darts(f).len()
        )));
    }
    Ok(size)
}

fn side_color(map: &CombinatorialMap, col: &FaceColoring, d: usize) -> FaceColor {
    col.color(map.face_of(map.alpha(d)))
}

/// Color of a surviving surface edge between faces of colors `a` and `b`.
fn link_color(a: FaceColor, b: FaceColor, attach: FaceColor) -> FaceColor {
    use FaceColor::*;
    match (a, b) {
        (G, B) | (B, G) => G,
        (R, x) | (x, R) if x == attach => B,
        _ => R,
    }
}

/// Positions of a red face: which of its edges take a triangle, and which edge each
/// inserted-face position faces.
struct Layout {
    darts: Vec<usize>,
    attach_pos: Vec<usize>,
    slot_edge: Vec<usize>,
}

fn layout(map: &CombinatorialMap, col: &FaceColoring, f: usize, attach: FaceColor) -> Result<Layout, BuildError> {
    let darts = map.face_darts(f).to_vec();
    let m = darts.len();
    let is_attach: Vec<bool> = darts.iter().map(|&d| side_color(map, col, d) == attach).collect();
    if !m.is_multiple_of(2) || (0..m).any(|i| is_attach[i] == is_attach[(i + 1) % m]) {
        return Err(BuildError::FaceSize {
            face: f,
            size: m,
            reason: format!("neighbors do not alternate with {attach}"),
        });
    }
    let attach_pos: Vec<usize> = (0..m).filter(|&i| is_attach[i]).collect();
    let slot_edge = attach_pos.iter().map(|&i| map.edge_of(darts[(i + 1) % m])).collect();
    Ok(Layout { darts, attach_pos, slot_edge })
}

/// One inserted face with its triangles, cycle edges and optional inner triangle.
struct Inserted {
    face: usize,
    tris: Vec<ERef>,
    cycle_vertices: Vec<usize>,
    fedges: Vec<ERef>,
    red_fedges: Vec<ERef>,
    slot_edges: Vec<Vec<ERef>>,
    slot_edge: Vec<usize>,
    delta: Option<ERef>,
}

type RingParts = (Vec<usize>, Vec<ERef>, Vec<ERef>, Vec<Vec<ERef>>, Option<ERef>);

/// Vertex path around an inserted cycle with three positions subdivided, colored R/G
/// alternately. Returns (vertices, edges, red edges, per-slot edges, inner triangle).
fn ring(
    draft: &mut Draft,
    corners: &[usize],
    choice: Option<[usize; 3]>,
    shadow: &dyn Fn(usize) -> Option<usize>,
) -> RingParts {
    let p = corners.len();
    let mut verts = Vec::new();
    let mut slot_paths: Vec<Vec<usize>> = Vec::with_capacity(p);
    let mut xs = Vec::new();
    for j in 0..p {
        let mut path = vec![corners[j]];
        verts.push(corners[j]);
        if choice.is_some_and(|c| c.contains(&j)) {
            let x = draft.vertex();
            xs.push(x);
            path.push(x);
            verts.push(x);
        }
        path.push(corners[(j + 1) % p]);
        slot_paths.push(path);
    }
    let mut fedges = Vec::new();
    let mut red = Vec::new();
    let mut slot_edges = Vec::with_capacity(p);
    let mut k = 0usize;
    for (j, path) in slot_paths.iter().enumerate() {
        let mut se = Vec::new();
        for w in path.windows(2) {
            let color = if k.is_multiple_of(2) { FaceColor::R } else { FaceColor::G };
            let r = draft.link(w[0], w[1], color, shadow(j));
            if color == FaceColor::R {
                red.push(r);
            }
            fedges.push(r);
            se.push(r);
            k += 1;
        }
        slot_edges.push(se);
    }
    let delta = (xs.len() == 3).then(|| draft.tri([xs[0], xs[1], xs[2]], None));
    (verts, fedges, red, slot_edges, delta)
}

/// The red-face insertion shared by families 1-3 and the even-face construction.
struct Insertion {
    draft: Draft,
    edge_ref: Vec<ERef>,
    inserted: Vec<Inserted>,
    /// Surface edge faced by an inserted position -> (inserted index, position).
    slot_of_edge: HashMap<usize, (usize, usize)>,
}

impl Insertion {
    fn slot_refs(&self, e: usize) -> &[ERef] {
        let (i, j) = self.slot_of_edge[&e];
        &self.inserted[i].slot_edges[j]
    }
}

fn insert_faces(
    map: &CombinatorialMap,
    col: &FaceColoring,
    selected: &[usize],
    attach: FaceColor,
    choices: Option<&[[usize; 3]]>,
) -> Result<Insertion, BuildError> {
    let mut sel = vec![false; map.face_count()];
    for &f in selected {
        sel[f] = true;
    }
    let mut draft = Draft { n: map.vertex_count(), ..Draft::default() };
    let mut edge_ref: Vec<Option<ERef>> = vec![None; map.edge_count()];
    for (e, slot) in edge_ref.iter_mut().enumerate() {
        let [f1, f2] = map.edge_faces(e);
        let (c1, c2) = (col.color(f1), col.color(f2));
        let absorbed = (c1 == FaceColor::R && sel[f1] && c2 == attach) || (c2 == FaceColor::R && sel[f2] && c1 == attach);
        if !absorbed {
            let [a, b] = map.edge_ends(e);
            *slot = Some(draft.link(a, b, link_color(c1, c2, attach), Some(e)));
        }
    }
    let mut inserted = Vec::new();
    let mut slot_of_edge = HashMap::new();
    for (idx, &f) in selected.iter().enumerate() {
        let lay = layout(map, col, f, attach)?;
        let m = lay.darts.len();
        let mut tris = Vec::new();
        let mut corners = Vec::new();
        for &i in &lay.attach_pos {
            let w = draft.vertex();
            corners.push(w);
            let e = map.edge_of(lay.darts[i]);
            let a = map.vertex_of(lay.darts[i]);
            let b = map.vertex_of(lay.darts[(i + 1) % m]);
            let t = draft.tri([a, b, w], Some(e));
            edge_ref[e] = Some(t);
            tris.push(t);
        }
        let choice = choices.map(|c| c[idx]);
        if choice.is_none() && corners.len() % 2 == 1 {
            return Err(BuildError::FaceSize { face: f, size: m, reason: "odd inserted face needs an inner triangle".into() });
        }
        let (cycle_vertices, fedges, red_fedges, slot_edges, delta) = ring(&mut draft, &corners, choice, &|_| None);
        for (j, &e) in lay.slot_edge.iter().enumerate() {
            slot_of_edge.insert(e, (idx, j));
        }
        inserted.push(Inserted { face: f, tris, cycle_vertices, fedges, red_fedges, slot_edges, slot_edge: lay.slot_edge, delta });
    }
    let edge_ref = edge_ref.into_iter().map(|r| r.expect("every surface edge has an image")).collect();
    Ok(Insertion { draft, edge_ref, inserted, slot_of_edge })
}

/// sigma1 (inserted cycle), sigma2 (triangles, inner triangle, surviving edges of f and red
/// inserted edges) and their sum for every inserted face.
fn red_cycles(ins: &Insertion, cycles: &mut Vec<(FaceColor, usize, CycleKind, Vec<ERef>)>) {
    for it in &ins.inserted {
        let s1 = it.fedges.clone();
        let mut s2: Vec<ERef> = it.tris.clone();
        s2.extend(it.delta);
        s2.extend(it.slot_edge.iter().map(|&e| ins.edge_ref[e]));
        s2.extend(it.red_fedges.iter().copied());
        let s3: Vec<ERef> = s1.iter().chain(s2.iter()).copied().collect();
        cycles.push((FaceColor::R, it.face, CycleKind::Sigma1, s1));
        cycles.push((FaceColor::R, it.face, CycleKind::Sigma2, s2));
        cycles.push((FaceColor::R, it.face, CycleKind::Sigma3, s3));
    }
}

fn boundary_refs(map: &CombinatorialMap, ins: &Insertion, f: usize) -> Vec<ERef> {
    map.face_darts(f).iter().map(|&d| ins.edge_ref[map.edge_of(d)]).collect()
}


fn finish(
    draft: Draft,
    map: &CombinatorialMap,
    col: Option<&FaceColoring>,
    construction: &str,
    embed: Option<Surface>,
    cycles: Vec<(FaceColor, usize, CycleKind, Vec<ERef>)>,
    (fprime, inner): (Vec<(usize, Vec<usize>)>, Vec<InnerTriangle>),
) -> (Hypergraph, FaceRegistry) {
    let cycles = cycles
        .into_iter()
        .map(|(color, face, kind, refs)| RegistryCycle { face, color, kind, edges: draft.cycle(&refs) })
        .collect();
    let h = draft.finish(construction, describe(map, col), embed);
    (h, FaceRegistry { cycles, fprime, inner })
}

fn registry_parts(ins: &Insertion, choices: Option<&[[usize; 3]]>) -> (Vec<(usize, Vec<usize>)>, Vec<InnerTriangle>) {
    let fprime = ins.inserted.iter().map(|it| (it.face, it.cycle_vertices.clone())).collect();
    let inner = match choices {
        Some(ch) => ins.inserted.iter().zip(ch).map(|(it, &slots)| InnerTriangle { face: it.face, slots }).collect(),
        None => Vec::new(),
    };
    (fprime, inner)
}

/// Placement problem for inserted faces whose position `j` adds a vertex to `target(f, j)`.
fn insertion_problem(
    map: &CombinatorialMap,
    col: &FaceColoring,
    faces: &[usize],
    attach: FaceColor,
    constraint_faces: &[usize],
    tag: &dyn Fn(usize) -> String,
    target: &dyn Fn(usize) -> Option<usize>,
) -> Result<PlacementProblem, BuildError> {
    let mut index = HashMap::new();
    for (i, &g) in constraint_faces.iter().enumerate() {
        index.insert(g, i);
    }
    let mut pf = Vec::new();
    for &f in faces {
        let lay = layout(map, col, f, attach)?;
        let slots = lay.slot_edge.iter().map(|&e| target(e).and_then(|g| index.get(&g).copied()).into_iter().collect()).collect();
        pf.push(PlacementFace { face: f, slots });
    }
    Ok(PlacementProblem {
        faces: pf,
        constraints: constraint_faces.iter().map(|&g| PlacementConstraint { tag: tag(g) }).collect(),
    })
}

/// Even-face insertion on the chosen red faces: an inserted face with half as many sides,
/// one triangle per edge shared with an `attach`-colored face.
pub fn build_sarvepalli_even(
    map: &CombinatorialMap,
    col: &FaceColoring,
    faces: &[usize],
    attach: FaceColor,
) -> Result<(Hypergraph, FaceRegistry), BuildError> {
    check_input(map, col)?;
    if attach == FaceColor::R {
        return Err(BuildError::ClassMismatch("triangles attach to blue or green faces".into()));
    }
    let faces: Vec<usize> = faces.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    for &f in &faces {
        let size = map.face_darts(f).len();
        if col.color(f) != FaceColor::R {
            return Err(BuildError::FaceSize { face: f, size, reason: "not a red face".into() });
        }
        if !size.is_multiple_of(4) {
            return Err(BuildError::FaceSize { face: f, size, reason: "side count not divisible by 4".into() });
        }
        if attach == FaceColor::B && size <= 4 {
            return Err(BuildError::FaceSize { face: f, size, reason: "side count must exceed 4".into() });
        }
    }
    let ins = insert_faces(map, col, &faces, attach, None)?;
    let mut cycles = Vec::new();
    red_cycles(&ins, &mut cycles);
    let (fprime, inner) = registry_parts(&ins, None);
    Ok(finish(ins.draft, map, Some(col), "sarvepalli", Some(surface(map)), cycles, (fprime, inner)))
}

/// Family 1: {2p1,2p2,4} with odd p1 > 2, every red face gets an inserted face and an inner
/// triangle placed so each green face's second cycle gains an even number of vertices.
pub fn build_family1(map: &CombinatorialMap, col: &FaceColoring) -> Result<(Hypergraph, FaceRegistry), BuildError> {
    check_input(map, col)?;
    let r = uniform_size(map, col, FaceColor::R)?;
    let g = uniform_size(map, col, FaceColor::G)?;
    let b = uniform_size(map, col, FaceColor::B)?;
    let p1 = r / 2;
    if b != 4 || p1 % 2 == 0 || p1 <= 2 {
        return Err(BuildError::ClassMismatch(format!("family 1 needs {{2p1,2p2,4}} with odd p1 > 2, got {{{r},{g},{b}}}")));
    }
    let red = col.faces_of(FaceColor::R);
    let green = col.faces_of(FaceColor::G);
    let across_green = |e: usize| map.edge_faces(e).into_iter().find(|&f| col.color(f) == FaceColor::G);
    let problem =
        insertion_problem(map, col, &red, FaceColor::B, &green, &|g| format!("G{g}.s2"), &across_green)?;
    let choices = place_inner_triangles(&problem)?;
    let ins = insert_faces(map, col, &red, FaceColor::B, Some(&choices))?;
    let mut cycles = Vec::new();
    red_cycles(&ins, &mut cycles);
    for &gf in &green {
        let s1 = boundary_refs(map, &ins, gf);
        let mut squares = BTreeSet::new();
        let mut arcs = Vec::new();
        for &d in map.face_darts(gf) {
            let other = map.face_of(map.alpha(d));
            match col.color(other) {
                FaceColor::B => {
                    squares.insert(other);
                }
                FaceColor::R => arcs.extend_from_slice(ins.slot_refs(map.edge_of(d))),
                FaceColor::G => {}
            }
        }
        let mut s2 = arcs;
        for s in squares {
            s2.extend(boundary_refs(map, &ins, s));
        }
        let s3: Vec<ERef> = s1.iter().chain(s2.iter()).copied().collect();
        cycles.push((FaceColor::G, gf, CycleKind::Sigma1, s1));
        cycles.push((FaceColor::G, gf, CycleKind::Sigma2, s2));
        cycles.push((FaceColor::G, gf, CycleKind::Sigma3, s3));
    }
    let (fprime, inner) = registry_parts(&ins, Some(&choices));
    Ok(finish(ins.draft, map, Some(col), "family1", Some(surface(map)), cycles, (fprime, inner)))
}

/// Red face on the far side of the green square across surface edge `e`, with the edge it
/// shares with that square.
fn opposite_across_square(map: &CombinatorialMap, col: &FaceColoring, e: usize) -> Option<(usize, usize)> {
    let [d0, d1] = map.edge_darts(e);
    let sq_dart = [d0, d1].into_iter().find(|&d| col.color(map.face_of(d)) == FaceColor::G)?;
    let q = map.face_darts(map.face_of(sq_dart));
    if q.len() != 4 {
        return None;
    }
    let k = q.iter().position(|&d| d == sq_dart)?;
    let far = q[(k + 2) % 4];
    let red = map.face_of(map.alpha(far));
    (col.color(red) == FaceColor::R).then_some((red, map.edge_of(far)))
}

/// Registry for the {2p1,4,6} families: red cycles, the red-face cycle around f and its
/// blue neighbors, and the green square boundaries.
fn hexagon_registry(
    map: &CombinatorialMap,
    col: &FaceColoring,
    ins: &Insertion,
) -> Vec<(FaceColor, usize, CycleKind, Vec<ERef>)> {
    let mut cycles = Vec::new();
    red_cycles(ins, &mut cycles);
    for it in &ins.inserted {
        let f = it.face;
        let mut hexes = BTreeSet::new();
        let mut refs = boundary_refs(map, ins, f);
        for &d in map.face_darts(f) {
            let other = map.face_of(map.alpha(d));
            if col.color(other) == FaceColor::B {
                hexes.insert(other);
            }
        }
        for h in hexes {
            refs.extend(boundary_refs(map, ins, h));
        }
        for &e in &it.slot_edge {
            if let Some((_, far)) = opposite_across_square(map, col, e) {
                refs.extend_from_slice(ins.slot_refs(far));
            }
        }
        cycles.push((FaceColor::R, f, CycleKind::FBar, refs));
    }
    for q in col.faces_of(FaceColor::G) {
        cycles.push((FaceColor::G, q, CycleKind::Sigma1, boundary_refs(map, ins, q)));
    }
    cycles
}

fn hexagon_class(map: &CombinatorialMap, col: &FaceColoring, odd: bool) -> Result<usize, BuildError> {
    check_input(map, col)?;
    let r = uniform_size(map, col, FaceColor::R)?;
    let g = uniform_size(map, col, FaceColor::G)?;
    let b = uniform_size(map, col, FaceColor::B)?;
    let p1 = r / 2;
    let ok = g == 4 && b == 6 && if odd { p1 % 2 == 1 && p1 > 6 } else { p1 % 2 == 0 && p1 > 4 };
    if !ok {
        let want = if odd { "odd p1 > 6" } else { "even p1 > 4" };
        return Err(BuildError::ClassMismatch(format!("needs {{2p1,4,6}} with {want}, got {{{r},{g},{b}}}")));
    }
    Ok(p1)
}

/// Family 2: {2p1,4,6} with even p1 > 4; triangles border the blue hexagons.
pub fn build_family2(map: &CombinatorialMap, col: &FaceColoring) -> Result<(Hypergraph, FaceRegistry), BuildError> {
    hexagon_class(map, col, false)?;
    let red = col.faces_of(FaceColor::R);
    let ins = insert_faces(map, col, &red, FaceColor::B, None)?;
    let cycles = hexagon_registry(map, col, &ins);
    let (fprime, inner) = registry_parts(&ins, None);
    Ok(finish(ins.draft, map, Some(col), "family2", Some(surface(map)), cycles, (fprime, inner)))
}

/// Family 3: {2p1,4,6} with odd p1 > 6; inner triangles keep every red-face cycle even.
pub fn build_family3(map: &CombinatorialMap, col: &FaceColoring) -> Result<(Hypergraph, FaceRegistry), BuildError> {
    hexagon_class(map, col, true)?;
    let red = col.faces_of(FaceColor::R);
    let target = |e: usize| opposite_across_square(map, col, e).map(|(f, _)| f);
    let problem = insertion_problem(map, col, &red, FaceColor::B, &red, &|f| format!("R{f}.fbar"), &target)?;
    let choices = place_inner_triangles(&problem)?;
    let ins = insert_faces(map, col, &red, FaceColor::B, Some(&choices))?;
    let cycles = hexagon_registry(map, col, &ins);
    let (fprime, inner) = registry_parts(&ins, Some(&choices));
    Ok(finish(ins.draft, map, Some(col), "family3", Some(surface(map)), cycles, (fprime, inner)))
}

/// Corner construction: one qubit per dart, a triangle per vertex and a ring per face.
struct Corners {
    draft: Draft,
    vertex_tri: Vec<ERef>,
    rings: Vec<Inserted>,
    /// dart -> (face, ring position starting at that dart)
    slot_of_dart: Vec<(usize, usize)>,
}

/// The red-shrunk lattice: red faces as vertices, green-blue edges as edges, green and
/// blue faces as faces. Returns the complex and each surface edge's index in it.
fn red_shrunk(map: &CombinatorialMap, col: &FaceColoring) -> (Surface, Vec<Option<usize>>) {
    let red_at = |d: usize| {
        let ds = map.vertex_darts(map.vertex_of(d));
        ds.iter().map(|&x| map.face_of(x)).find(|&f| col.color(f) == FaceColor::R).expect("proper coloring")
    };
    let mut index = vec![None; map.edge_count()];
    let mut ends = Vec::new();
    for (e, slot) in index.iter_mut().enumerate() {
        let [f1, f2] = map.edge_faces(e);
        if col.color(f1) != FaceColor::R && col.color(f2) != FaceColor::R {
            let [a, b] = map.edge_darts(e);
            *slot = Some(ends.len());
            ends.push([red_at(a), red_at(b)]);
        }
    }
    let mut red_index = vec![0; map.face_count()];
    for (i, f) in col.faces_of(FaceColor::R).into_iter().enumerate() {
        red_index[f] = i;
    }
    let ends = ends.into_iter().map(|[a, b]| [red_index[a], red_index[b]]).collect();
    let faces = (0..map.face_count())
        .filter(|&f| col.color(f) != FaceColor::R)
        .map(|f| map.face_darts(f).iter().filter_map(|&d| index[map.edge_of(d)]).collect())
        .collect();
    ((col.faces_of(FaceColor::R).len(), ends, faces), index)
}

fn corner_build(
    map: &CombinatorialMap,
    choices: Option<&[[usize; 3]]>,
    projection: Option<(&FaceColoring, &[Option<usize>])>,
) -> Result<Corners, BuildError> {
    let mut draft = Draft { n: map.dart_count(), ..Draft::default() };
    let mut vertex_tri = Vec::new();
    for v in 0..map.vertex_count() {
        let ds = map.vertex_darts(v);
        if ds.len() != 3 {
            return Err(BuildError::InvalidInput(format!("vertex {v} has valence {}", ds.len())));
        }
        vertex_tri.push(draft.tri([ds[0], ds[1], ds[2]], None));
    }
    let mut rings = Vec::new();
    let mut slot_of_dart = vec![(0, 0); map.dart_count()];
    for f in 0..map.face_count() {
        let darts = map.face_darts(f).to_vec();
        let choice = choices.map(|c| c[f]);
        if choice.is_none() && darts.len() % 2 == 1 {
            return Err(BuildError::FaceSize { face: f, size: darts.len(), reason: "odd face needs an inner triangle".into() });
        }
        // green ring edges facing green-blue edges carry the projection
        let shadow = |j: usize| match projection {
            Some((col, index)) if col.color(f) == FaceColor::G => index[map.edge_of(darts[j])],
            _ => None,
        };
        let (cycle_vertices, fedges, red_fedges, slot_edges, delta) = ring(&mut draft, &darts, choice, &shadow);
        for (j, &d) in darts.iter().enumerate() {
            slot_of_dart[d] = (f, j);
        }
        let slot_edge = darts.iter().map(|&d| map.edge_of(d)).collect();
        rings.push(Inserted { face: f, tris: Vec::new(), cycle_vertices, fedges, red_fedges, slot_edges, slot_edge, delta });
    }
    Ok(Corners { draft, vertex_tri, rings, slot_of_dart })
}

fn corner_registry(map: &CombinatorialMap, c: &Corners, color_of: &dyn Fn(usize) -> FaceColor) -> Vec<(FaceColor, usize, CycleKind, Vec<ERef>)> {
    let mut cycles = Vec::new();
    for rg in &c.rings {
        let f = rg.face;
        let s1 = rg.fedges.clone();
        let mut s2: Vec<ERef> = Vec::new();
        let verts: BTreeSet<usize> = map.face_darts(f).iter().map(|&d| map.vertex_of(d)).collect();
        s2.extend(verts.iter().map(|&v| c.vertex_tri[v]));
        s2.extend(rg.delta);
        s2.extend(rg.red_fedges.iter().copied());
        for &d in map.face_darts(f) {
            let (g, j) = c.slot_of_dart[map.alpha(d)];
            s2.extend_from_slice(&c.rings[g].slot_edges[j]);
        }
        let s3: Vec<ERef> = s1.iter().chain(s2.iter()).copied().collect();
        let col = color_of(f);
        cycles.push((col, f, CycleKind::Sigma1, s1));
        cycles.push((col, f, CycleKind::Sigma2, s2));
        cycles.push((col, f, CycleKind::Sigma3, s3));
    }
    cycles
}

/// Bombín's construction: corners of the colored map as qubits, a triangle per vertex and
/// rings alternating red and green around each face. n = 3V.
pub fn build_bombin(map: &CombinatorialMap, col: &FaceColoring) -> Result<(Hypergraph, FaceRegistry), BuildError> {
    check_input(map, col)?;
    let (shrunk, index) = red_shrunk(map, col);
    let c = corner_build(map, None, Some((col, &index)))?;
    let cycles = corner_registry(map, &c, &|f| col.color(f));
    let fprime = c.rings.iter().map(|r| (r.face, r.cycle_vertices.clone())).collect();
    Ok(finish(c.draft, map, Some(col), "bombin", Some(shrunk), cycles, (fprime, Vec::new())))
}

/// Family 4: a {p,3} map with odd p >= 7 gives {p,4,3,4}; corners become qubits and every
/// p-gon ring carries an inner triangle keeping each neighbor's second cycle even.
pub fn build_family4(map: &CombinatorialMap) -> Result<(Hypergraph, FaceRegistry), BuildError> {
    if let Some(v) = map.vertex_valences().iter().position(|&x| x != 3) {
        return Err(BuildError::InvalidInput(format!("vertex {v} has valence {}", map.vertex_valences()[v])));
    }
    let sizes = map.face_sizes();
    let p = sizes[0];
    if let Some(f) = sizes.iter().position(|&s| s != p) {
        return Err(BuildError::ClassMismatch(format!("faces 0 and {f} have {p} and {} sides", sizes[f])));
    }
    if p.is_multiple_of(2) || p < 7 {
        return Err(BuildError::ClassMismatch(format!("family 4 needs odd p >= 7, got p = {p}")));
    }
    let faces = (0..map.face_count())
        .map(|f| PlacementFace {
            face: f,
            slots: map.face_darts(f).iter().map(|&d| vec![map.face_of(map.alpha(d))]).collect(),
        })
        .collect();
    let problem = PlacementProblem {
        faces,
        constraints: (0..map.face_count()).map(|f| PlacementConstraint { tag: format!("R{f}.s2") }).collect(),
    };
    let choices = place_inner_triangles(&problem)?;
    let c = corner_build(map, Some(&choices), None)?;
    let cycles = corner_registry(map, &c, &|_| FaceColor::R);
    let fprime = c.rings.iter().map(|r| (r.face, r.cycle_vertices.clone())).collect();
    let inner = choices.iter().enumerate().map(|(f, &slots)| InnerTriangle { face: f, slots }).collect();
    Ok(finish(c.draft, map, None, "family4", None, cycles, (fprime, inner)))
}
