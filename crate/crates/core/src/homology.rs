//! Cycle space and homology of hypergraphs, the triangle-count bound l, and the d_T / d_L
//! bounds of the corner construction.

use std::collections::VecDeque;

use thiserror::Error;

use crate::gf2::{nullspace, Bits, Decomposer, Subspace};
use crate::hypergraph::Hypergraph;
use crate::pauli::{analyze_code, loop_operator, AnalyzeError, GroupAnalysis};
use crate::surface_map::CombinatorialMap;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("hypergraph records no surface embedding")]
    NoEmbedding,
    #[error("edge set is not a closed hypercycle")]
    NotACycle,
    #[error("surface projection of a hypercycle is not closed")]
    ProjectionNotClosed,
    #[error("loop operator does not commute with the gauge group")]
    LoopOutsideCentralizer,
    #[error("homology is trivial")]
    TrivialHomology,
    #[error("a hypercycle without triangles is nontrivial")]
    TrianglelessNontrivial,
    #[error("expected a corner-construction instance, got {0:?}")]
    NotBombin(String),
    #[error(transparent)]
    Analyze(#[from] AnalyzeError),
}

/// Kernel of the vertex-edge incidence matrix.
pub fn cycle_space(h: &Hypergraph) -> Subspace {
    let m = h.edge_count();
    let rows: Vec<Bits> = h.incidence().into_iter().map(|es| Bits::from_indices(m, es)).collect();
    nullspace(&rows, m)
}

/// How triviality is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomologyMode {
    /// Project onto the recorded surface and reduce modulo face boundaries.
    Surface,
    /// Trivial when the loop operator lies in the stabilizer group.
    Stabilizer,
    /// Surface when an embedding is recorded, Stabilizer otherwise.
    Auto,
}

/// Coordinates modulo a subspace: generators are `base` followed by complement
/// representatives, and the class is the complement part of a decomposition.
#[derive(Clone, Debug)]
struct Quotient {
    dec: Decomposer,
    base_rank: usize,
    dim: usize,
}

impl Quotient {
    fn new(base: &Subspace, whole: &Subspace) -> Quotient {
        let comp = base.complement_in(whole);
        let mut gens: Vec<Bits> = base.basis().to_vec();
        let dim = comp.len();
        gens.extend(comp);
        Quotient { dec: Decomposer::new(base.ambient(), &gens), base_rank: base.rank(), dim }
    }

    fn coords(&self, v: &Bits) -> Option<Bits> {
        self.dec.solve(v).map(|c| c.slice(self.base_rank, self.dim))
    }
}

#[derive(Clone, Debug)]
enum ClassMap {
    Surface { embedding: crate::hypergraph::Embedding, quotient: Quotient },
    Stabilizer { quotient: Quotient },
}

#[derive(Clone, Debug)]
pub struct HomologyDecomposition {
    pub cycle: Subspace,
    pub boundary: Subspace,
    pub h1_dim: usize,
    pub mode: HomologyMode,
    class_map: ClassMap,
}

impl HomologyDecomposition {
    pub fn new(h: &Hypergraph, mode: HomologyMode) -> Result<HomologyDecomposition, HomologyError> {
        let mode = match mode {
            HomologyMode::Auto if h.embedding.is_some() => HomologyMode::Surface,
            HomologyMode::Auto => HomologyMode::Stabilizer,
            m => m,
        };
        let class_map = match mode {
            HomologyMode::Surface => {
                let emb = h.embedding.clone().ok_or(HomologyError::NoEmbedding)?;
                let m = emb.edge_count();
                let mut inc = vec![Vec::new(); emb.vertex_count];
                for (e, &[a, b]) in emb.edge_ends.iter().enumerate() {
                    inc[a].push(e);
                    inc[b].push(e);
                }
                let rows: Vec<Bits> = inc.into_iter().map(|es| Bits::from_indices(m, es)).collect();
                let z = nullspace(&rows, m);
                let faces: Vec<Bits> = emb.faces.iter().map(|f| Bits::from_indices(m, f.iter().copied())).collect();
                let b = Subspace::span(m, &faces);
                ClassMap::Surface { embedding: emb, quotient: Quotient::new(&b, &z) }
            }
            _ => {
                let a = analyze_code(h)?;
                ClassMap::Stabilizer { quotient: Quotient::new(&a.stabilizer, &a.centralizer) }
            }
        };
        Self::finish(h, mode, class_map)
    }

    /// Stabilizer-mode decomposition reusing an existing analysis.
    pub fn from_analysis(h: &Hypergraph, a: &GroupAnalysis) -> Result<HomologyDecomposition, HomologyError> {
        let class_map = ClassMap::Stabilizer { quotient: Quotient::new(&a.stabilizer, &a.centralizer) };
        Self::finish(h, HomologyMode::Stabilizer, class_map)
    }

    fn finish(h: &Hypergraph, mode: HomologyMode, class_map: ClassMap) -> Result<HomologyDecomposition, HomologyError> {
        let m = h.edge_count();
        let mut d = HomologyDecomposition { cycle: cycle_space(h), boundary: Subspace::new(m), h1_dim: 0, mode, class_map };
        let classes: Vec<Bits> = d.cycle.basis().iter().map(|c| d.class_raw(h, c)).collect::<Result<_, _>>()?;
        let cdec = Decomposer::new(d.quotient().dim, &classes);
        d.h1_dim = cdec.rank();
        for rel in cdec.relations() {
            let mut v = Bits::zeros(m);
            for i in rel.iter_ones() {
                v.xor_assign(&d.cycle.basis()[i]);
            }
            d.boundary.insert(v);
        }
        Ok(d)
    }

    fn quotient(&self) -> &Quotient {
        match &self.class_map {
            ClassMap::Surface { quotient, .. } | ClassMap::Stabilizer { quotient } => quotient,
        }
    }

    fn class_raw(&self, h: &Hypergraph, cycle: &Bits) -> Result<Bits, HomologyError> {
        match &self.class_map {
            ClassMap::Surface { embedding, quotient } => {
                quotient.coords(&embedding.project(cycle)).ok_or(HomologyError::ProjectionNotClosed)
            }
            ClassMap::Stabilizer { quotient } => {
                let w = loop_operator(h, cycle).map_err(|_| HomologyError::NotACycle)?;
                quotient.coords(&w.to_bits()).ok_or(HomologyError::LoopOutsideCentralizer)
            }
        }
    }

    /// Coordinates of a hypercycle modulo the boundary space.
    pub fn homology_class(&self, h: &Hypergraph, cycle: &Bits) -> Result<Bits, HomologyError> {
        if !h.is_hypercycle(cycle) {
            return Err(HomologyError::NotACycle);
        }
        self.class_raw(h, cycle)
    }

    pub fn is_trivial(&self, h: &Hypergraph, cycle: &Bits) -> Result<bool, HomologyError> {
        Ok(self.homology_class(h, cycle)?.is_zero())
    }

    /// `class=<coords> triangles=<t> edges=<list>`
    pub fn report_row(&self, h: &Hypergraph, cycle: &Bits) -> Result<String, HomologyError> {
        let class = self.homology_class(h, cycle)?;
        let coords: String = (0..class.len()).map(|i| if class.get(i) { '1' } else { '0' }).collect();
        let tris = cycle.iter_ones().filter(|&e| h.is_triangle(e)).count();
        let edges: Vec<String> = cycle.iter_ones().map(|e| e.to_string()).collect();
        Ok(format!("class={coords} triangles={tris} edges={}", edges.join(",")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinTriangles {
    pub l: usize,
    /// A nontrivial hypercycle with `l` triangles.
    pub witness: Bits,
    /// False when the node budget ran out before the bound was proven.
    pub proven_optimal: bool,
}

/// Basis of the triangle projection of the cycle space, each row carrying a cycle with that
/// projection and its class.
struct TriangleImage {
    rows: Vec<(Bits, Bits, Bits)>,
    pivots: Vec<usize>,
}

impl TriangleImage {
    fn reduce(&self, t: &mut Bits, class: &mut Bits, cycle: &mut Bits) {
        for ((row, c, cy), &p) in self.rows.iter().zip(&self.pivots) {
            if t.get(p) {
                t.xor_assign(row);
                class.xor_assign(c);
                cycle.xor_assign(cy);
            }
        }
    }
}

fn triangle_image(h: &Hypergraph, d: &HomologyDecomposition) -> Result<TriangleImage, HomologyError> {
    let e2 = h.rank2.len();
    let e3 = h.rank3.len();
    let mut img = TriangleImage { rows: Vec::new(), pivots: Vec::new() };
    for c in d.cycle.basis() {
        let mut t = c.slice(e2, e3);
        let mut class = d.class_raw(h, c)?;
        let mut cycle = c.clone();
        img.reduce(&mut t, &mut class, &mut cycle);
        match t.first_one() {
            None if !class.is_zero() => return Err(HomologyError::TrianglelessNontrivial),
            None => {}
            Some(p) => {
                for (row, cl, cy) in img.rows.iter_mut() {
                    if row.get(p) {
                        row.xor_assign(&t);
                        cl.xor_assign(&class);
                        cy.xor_assign(&cycle);
                    }
                }
                img.rows.push((t, class, cycle));
                img.pivots.push(p);
            }
        }
    }
    Ok(img)
}

/// Image dimension up to which every element is enumerated.
const FULL_ENUMERATION_DIM: usize = 22;

/// Minimum number of triangles over nontrivial hypercycles.
///
/// Works on the image of the cycle space in triangle coordinates, where the class is well
/// defined because triangle-free cycles are trivial. Small images are enumerated in Gray-code
/// order; larger ones are searched by increasing triangle count under `node_budget`.
pub fn min_triangles_nontrivial(h: &Hypergraph, d: &HomologyDecomposition, node_budget: usize) -> Result<MinTriangles, HomologyError> {
    if d.h1_dim == 0 {
        return Err(HomologyError::TrivialHomology);
    }
    let img = triangle_image(h, d)?;
    let dim = img.rows.len();
    let e3 = h.rank3.len();
    let m = h.edge_count();
    if dim <= FULL_ENUMERATION_DIM {
        let qdim = d.quotient().dim;
        let mut t = Bits::zeros(e3);
        let mut class = Bits::zeros(qdim);
        let mut best: Option<(usize, u64)> = None;
        let mut code = 0u64;
        for i in 1..(1u64 << dim) {
            let bit = i.trailing_zeros() as usize;
            code ^= 1 << bit;
            t.xor_assign(&img.rows[bit].0);
            class.xor_assign(&img.rows[bit].1);
            if !class.is_zero() {
                let w = t.count_ones();
                if best.is_none_or(|(bw, _)| w < bw) {
                    best = Some((w, code));
                }
            }
        }
        let (l, code) = best.expect("nonzero h1 has a nontrivial class");
        let mut witness = Bits::zeros(m);
        for (j, row) in img.rows.iter().enumerate() {
            if code >> j & 1 == 1 {
                witness.xor_assign(&row.2);
            }
        }
        return Ok(MinTriangles { l, witness, proven_optimal: true });
    }
    // fallback upper bound from the basis rows
    let mut best: Option<(usize, Bits)> = img
        .rows
        .iter()
        .filter(|r| !r.1.is_zero())
        .map(|r| (r.0.count_ones(), r.2.clone()))
        .min_by_key(|x| x.0);
    let mut nodes = 0usize;
    let upper = best.as_ref().map_or(e3, |b| b.0);
    for w in 1..upper.min(e3 + 1) {
        let mut support: Vec<usize> = (0..w).collect();
        loop {
            nodes += 1;
            if nodes > node_budget {
                let (l, witness) = best.expect("nonzero h1 has a nontrivial class");
                return Ok(MinTriangles { l, witness, proven_optimal: false });
            }
            let mut t = Bits::from_indices(e3, support.iter().copied());
            let mut class = Bits::zeros(d.quotient().dim);
            let mut cycle = Bits::zeros(m);
            img.reduce(&mut t, &mut class, &mut cycle);
            if t.is_zero() && !class.is_zero() {
                return Ok(MinTriangles { l: w, witness: cycle, proven_optimal: true });
            }
            let mut i = w;
            while i > 0 && support[i - 1] == e3 - w + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            support[i - 1] += 1;
            for j in i..w {
                support[j] = support[j - 1] + 1;
            }
        }
    }
    let (l, witness) = best.take().expect("nonzero h1 has a nontrivial class");
    Ok(MinTriangles { l, witness, proven_optimal: true })
}

/// Reference minimum over every element of the cycle space; for small instances only.
pub fn min_triangles_exhaustive(h: &Hypergraph, d: &HomologyDecomposition) -> Result<Option<usize>, HomologyError> {
    let basis = d.cycle.basis();
    assert!(basis.len() < 28, "cycle space too large to enumerate");
    let classes: Vec<Bits> = basis.iter().map(|c| d.class_raw(h, c)).collect::<Result<_, _>>()?;
    let mut cycle = Bits::zeros(h.edge_count());
    let mut class = Bits::zeros(d.quotient().dim);
    let mut best = None;
    for i in 1..(1u64 << basis.len()) {
        let bit = i.trailing_zeros() as usize;
        cycle.xor_assign(&basis[bit]);
        class.xor_assign(&classes[bit]);
        if !class.is_zero() {
            let t = cycle.iter_ones().filter(|&e| h.is_triangle(e)).count();
            if best.is_none_or(|b| t < b) {
                best = Some(t);
            }
        }
    }
    Ok(best)
}

/// Homology of the dual graph of a map: vertices are faces, edges are map edges, and the
/// vertex stars of the map bound.
pub struct DualHomology {
    ends: Vec<[usize; 2]>,
    nodes: usize,
    quotient: Quotient,
}

impl DualHomology {
    pub fn new(map: &CombinatorialMap) -> DualHomology {
        let m = map.edge_count();
        let ends: Vec<[usize; 2]> = (0..m).map(|e| map.edge_faces(e)).collect();
        let nodes = map.face_count();
        let mut inc = vec![Bits::zeros(m); nodes];
        for (e, &[a, b]) in ends.iter().enumerate() {
            inc[a].flip(e);
            inc[b].flip(e);
        }
        let z = nullspace(&inc, m);
        let stars: Vec<Bits> = map.vertex_edges().into_iter().map(|es| {
            let mut b = Bits::zeros(m);
            for e in es {
                b.flip(e);
            }
            b
        }).collect();
        let bnd = Subspace::span(m, &stars);
        DualHomology { ends, nodes, quotient: Quotient::new(&bnd, &z) }
    }

    pub fn h1_dim(&self) -> usize {
        self.quotient.dim
    }

    /// None when the chain is not closed.
    pub fn is_nontrivial(&self, chain: &Bits) -> Option<bool> {
        self.quotient.coords(chain).map(|c| !c.is_zero())
    }

    pub fn edge_ends(&self) -> &[[usize; 2]] {
        &self.ends
    }

    /// Length of the shortest noncontractible cycle, from the fundamental cycles of a
    /// breadth-first tree at every root.
    pub fn shortest_nontrivial(&self) -> Option<usize> {
        let m = self.ends.len();
        let mut adj = vec![Vec::new(); self.nodes];
        for (e, &[a, b]) in self.ends.iter().enumerate() {
            adj[a].push((b, e));
            if a != b {
                adj[b].push((a, e));
            }
        }
        let mut best: Option<usize> = None;
        for root in 0..self.nodes {
            let mut path: Vec<Option<Bits>> = vec![None; self.nodes];
            let mut tree_edge = vec![usize::MAX; self.nodes];
            path[root] = Some(Bits::zeros(m));
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(v, e) in &adj[u] {
                    if path[v].is_none() {
                        let mut p = path[u].clone().expect("visited");
                        p.flip(e);
                        path[v] = Some(p);
                        tree_edge[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            for (e, &[a, b]) in self.ends.iter().enumerate() {
                if tree_edge[a] == e || tree_edge[b] == e {
                    continue;
                }
                let (Some(pa), Some(pb)) = (&path[a], &path[b]) else { continue };
                let mut c = pa.xor(pb);
                c.flip(e);
                let len = c.count_ones();
                if best.is_some_and(|b| len >= b) {
                    continue;
                }
                if self.is_nontrivial(&c) == Some(true) {
                    best = Some(len);
                }
            }
        }
        best
    }
}

#[derive(Clone, Debug)]
pub struct BombinBounds {
    pub d_t: MinTriangles,
    pub d_l: usize,
}

/// d_T from the triangle search and d_L from the shortest noncontractible dual cycle.
pub fn bombin_bounds(h: &Hypergraph, map: &CombinatorialMap, node_budget: usize) -> Result<BombinBounds, HomologyError> {
    if h.construction != "bombin" {
        return Err(HomologyError::NotBombin(h.construction.clone()));
    }
    let d = HomologyDecomposition::new(h, HomologyMode::Surface)?;
    let d_t = min_triangles_nontrivial(h, &d, node_budget)?;
    let d_l = DualHomology::new(map).shortest_nontrivial().ok_or(HomologyError::TrivialHomology)?;
    Ok(BombinBounds { d_t, d_l })
}
