//! Phase-free Pauli algebra over GF(2): edge operators, gauge and stabilizer groups,
//! loop operators and link-measurement orderings.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::gf2::{nullspace, Bits, Decomposer, Subspace};
use crate::hypergraph::{EdgeView, Hypergraph};
use crate::surface_map::FaceColor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("operators act on {0} and {1} qubits")]
    SizeMismatch(usize, usize),
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("not a closed hypercycle: vertex {0} meets it an odd number of times")]
    NotClosed(usize),
    #[error("target is not a product of the given links")]
    NotInSpan,
    #[error("code encodes no logical qubits")]
    NoLogicalQubits,
    #[error("cannot parse Pauli text {0:?}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyzeError {
    #[error("edges {0} and {1} violate the commutation rule")]
    CommutationViolation(usize, usize),
    #[error("dim G - s = {0} is odd")]
    NonIntegralGauge(usize),
}

/// A Pauli operator without phase: X on `x`, Z on `z`, Y where both are set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliVector {
    pub x: Bits,
    pub z: Bits,
}

impl PauliVector {
    pub fn identity(n: usize) -> Self {
        PauliVector { x: Bits::zeros(n), z: Bits::zeros(n) }
    }

    /// `letter` in X, Y, Z on each listed qubit.
    pub fn uniform(n: usize, letter: char, qubits: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &q in qubits {
            p.apply(letter, q);
        }
        p
    }

    fn apply(&mut self, letter: char, q: usize) {
        match letter {
            'X' => self.x.flip(q),
            'Z' => self.z.flip(q),
            'Y' => {
                self.x.flip(q);
                self.z.flip(q);
            }
            _ => panic!("unknown Pauli letter {letter}"),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn weight(&self) -> usize {
        self.x.words().iter().zip(self.z.words()).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn mul(&self, other: &PauliVector) -> PauliVector {
        PauliVector { x: self.x.xor(&other.x), z: self.z.xor(&other.z) }
    }

    pub fn mul_assign(&mut self, other: &PauliVector) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Symplectic row: x bits then z bits.
    pub fn to_bits(&self) -> Bits {
        self.x.concat(&self.z)
    }

    pub fn from_bits(b: &Bits) -> PauliVector {
        let n = b.len() / 2;
        PauliVector { x: b.slice(0, n), z: b.slice(n, n) }
    }

    /// Row whose ordinary dot product with `to_bits` of another operator is the symplectic form.
    fn dual_bits(&self) -> Bits {
        self.z.concat(&self.x)
    }

    /// Parses `X0 X8 Y3 Z1`, juxtaposed `Z1Z2` and parenthesized `(Z1Z2)(X3X4)` forms into
    /// their product.
    pub fn parse(n: usize, text: &str) -> Result<PauliVector, PauliError> {
        let mut p = PauliVector::identity(n);
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        let mut i = 0;
        while i < chars.len() {
            let letter = chars[i];
            if !matches!(letter, 'X' | 'Y' | 'Z') {
                return Err(PauliError::Parse(text.to_string()));
            }
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let q: usize = chars[i + 1..j].iter().collect::<String>().parse().map_err(|_| PauliError::Parse(text.to_string()))?;
            if q >= n {
                return Err(PauliError::Parse(text.to_string()));
            }
            p.apply(letter, q);
            i = j;
        }
        Ok(p)
    }

    /// Splits `(Z1Z2)(X3X4)...` into its factors.
    pub fn parse_factors(n: usize, text: &str) -> Result<Vec<PauliVector>, PauliError> {
        text.split(')')
            .map(|s| s.trim().trim_start_matches('('))
            .filter(|s| !s.is_empty())
            .map(|s| PauliVector::parse(n, s))
            .collect()
    }
}

impl fmt::Display for PauliVector {
    /// `X0 X8 Y3 Y10 Z1 Z2`: X, then Y, then Z positions, identity omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (letter, want) in [('X', (true, false)), ('Y', (true, true)), ('Z', (false, true))] {
            for q in 0..self.n() {
                if (self.x.get(q), self.z.get(q)) == want {
                    parts.push(format!("{letter}{q}"));
                }
            }
        }
        if parts.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

impl fmt::Debug for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

pub fn commutes(a: &PauliVector, b: &PauliVector) -> Result<bool, PauliError> {
    if a.n() != b.n() {
        return Err(PauliError::SizeMismatch(a.n(), b.n()));
    }
    Ok(a.x.dot(&b.z) == a.z.dot(&b.x))
}

fn link_letter(c: FaceColor) -> char {
    match c {
        FaceColor::R => 'X',
        FaceColor::G => 'Y',
        FaceColor::B => 'Z',
    }
}

/// XX, YY or ZZ on a link by color; ZZZ on a triangle.
pub fn edge_operator(h: &Hypergraph, edge: usize) -> Result<PauliVector, PauliError> {
    if edge >= h.edge_count() {
        return Err(PauliError::UnknownEdge(edge));
    }
    Ok(match h.edge(edge) {
        EdgeView::Link(l) => PauliVector::uniform(h.vertex_count, link_letter(l.color), &l.ends),
        EdgeView::Triangle(t) => PauliVector::uniform(h.vertex_count, 'Z', t),
    })
}

/// Parity that the commutation rule predicts for two edges: shared vertex count mod 2,
/// and 0 for two triangles.
pub fn eta(h: &Hypergraph, a: usize, b: usize) -> bool {
    if h.is_triangle(a) && h.is_triangle(b) {
        return false;
    }
    let sa = h.edge(a).support();
    let shared = h.edge(b).support().iter().filter(|v| sa.contains(v)).count();
    shared % 2 == 1
}

/// Link operators of the derived ordinary graph: every colored link, and the three
/// pairwise ZZ links of each triangle. Each entry keeps the edge it came from.
pub fn gauge_links(h: &Hypergraph) -> Vec<(usize, [usize; 2], PauliVector)> {
    let n = h.vertex_count;
    let mut out = Vec::new();
    for i in 0..h.edge_count() {
        match h.edge(i) {
            EdgeView::Link(l) => out.push((i, l.ends, PauliVector::uniform(n, link_letter(l.color), &l.ends))),
            EdgeView::Triangle(t) => {
                for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                    out.push((i, [a, b], PauliVector::uniform(n, 'Z', &[a, b])));
                }
            }
        }
    }
    out
}

pub fn span(n: usize, gens: &[PauliVector]) -> Subspace {
    let rows: Vec<Bits> = gens.iter().map(|g| g.to_bits()).collect();
    Subspace::span(2 * n, &rows)
}

pub fn member(space: &Subspace, v: &PauliVector) -> bool {
    space.contains(&v.to_bits())
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Subspace {
    a.intersect(b)
}

/// All operators commuting with every element of `gens`.
pub fn centralizer(gens: &Subspace) -> Subspace {
    let rows: Vec<Bits> = gens.basis().iter().map(|r| PauliVector::from_bits(r).dual_bits()).collect();
    nullspace(&rows, gens.ambient())
}

#[derive(Clone, Debug)]
pub struct GroupAnalysis {
    pub n: usize,
    pub dim_gauge: usize,
    pub s: usize,
    pub r: usize,
    pub k: usize,
    pub gauge: Subspace,
    pub stabilizer: Subspace,
    pub centralizer: Subspace,
}

impl GroupAnalysis {
    /// Stabilizer group from any gauge generators.
    pub fn from_generators(n: usize, gens: &[PauliVector]) -> Result<GroupAnalysis, AnalyzeError> {
        let gauge = span(n, gens);
        let cent = centralizer(&gauge);
        let stabilizer = gauge.intersect(&cent);
        let dim_gauge = gauge.rank();
        let s = stabilizer.rank();
        if !(dim_gauge - s).is_multiple_of(2) {
            return Err(AnalyzeError::NonIntegralGauge(dim_gauge - s));
        }
        let r = (dim_gauge - s) / 2;
        Ok(GroupAnalysis { n, dim_gauge, s, r, k: n - r - s, gauge, stabilizer, centralizer: cent })
    }

    /// Logical classes: centralizer modulo stabilizer, of dimension 2k.
    pub fn logical_dim(&self) -> usize {
        self.centralizer.rank() - self.s
    }
}

/// First edge pair whose operators disagree with the commutation rule.
pub fn commutation_violation(h: &Hypergraph) -> Option<(usize, usize)> {
    let ops: Vec<PauliVector> = (0..h.edge_count()).map(|i| edge_operator(h, i).expect("edge in range")).collect();
    let inc = h.incidence();
    let mut checked: HashSet<(usize, usize)> = HashSet::new();
    for es in &inc {
        for &a in es {
            for &b in es {
                if a < b && checked.insert((a, b)) {
                    let c = commutes(&ops[a], &ops[b]).expect("same size");
                    if c == eta(h, a, b) {
                        return Some((a, b));
                    }
                }
            }
        }
    }
    None
}

/// G from the derived links, S = G ∩ C(G), and the parameters n, s, r, k.
pub fn analyze_code(h: &Hypergraph) -> Result<GroupAnalysis, AnalyzeError> {
    if let Some((a, b)) = commutation_violation(h) {
        return Err(AnalyzeError::CommutationViolation(a, b));
    }
    let gens: Vec<PauliVector> = gauge_links(h).into_iter().map(|x| x.2).collect();
    GroupAnalysis::from_generators(h.vertex_count, &gens)
}

/// W(M): product of the edge operators of a closed hypercycle.
pub fn loop_operator(h: &Hypergraph, cycle: &Bits) -> Result<PauliVector, PauliError> {
    let mut deg = vec![false; h.vertex_count];
    let mut w = PauliVector::identity(h.vertex_count);
    for i in cycle.iter_ones() {
        let op = edge_operator(h, i)?;
        for &v in h.edge(i).support() {
            deg[v] = !deg[v];
        }
        w.mul_assign(&op);
    }
    if let Some(v) = deg.iter().position(|&d| d) {
        return Err(PauliError::NotClosed(v));
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GloopReport {
    pub loop_dim: usize,
    pub centralizer_dim: usize,
}

impl GloopReport {
    pub fn holds(&self) -> bool {
        self.loop_dim == self.centralizer_dim
    }
}

/// Compares the span of all loop operators with the centralizer of the gauge group.
pub fn verify_gloop_identity(h: &Hypergraph) -> GloopReport {
    let cycles = crate::homology::cycle_space(h);
    let loops: Vec<Bits> =
        cycles.basis().iter().map(|c| loop_operator(h, c).expect("cycle basis is closed").to_bits()).collect();
    let loop_space = Subspace::span(2 * h.vertex_count, &loops);
    let gens: Vec<PauliVector> = gauge_links(h).into_iter().map(|x| x.2).collect();
    let cent = centralizer(&span(h.vertex_count, &gens));
    let loop_dim = if loop_space.is_subspace_of(&cent) { loop_space.rank() } else { usize::MAX };
    GloopReport { loop_dim, centralizer_dim: cent.rank() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyndromeOutcome {
    /// Indices into the link list, in measurement order.
    Found(Vec<usize>),
    Infeasible,
    BudgetExhausted,
}

/// Limits for [`syndrome_order`].
#[derive(Clone, Copy, Debug)]
pub struct SyndromeBudget {
    /// Maximum number of decompositions of the target tried.
    pub decompositions: usize,
    /// Maximum search nodes per decomposition.
    pub nodes: usize,
}

impl Default for SyndromeBudget {
    fn default() -> Self {
        SyndromeBudget { decompositions: 4096, nodes: 20_000 }
    }
}

/// Orders a subset of `links` whose product is `target` so that every link commutes with
/// the product of those before it. Decompositions are tried by increasing size.
pub fn syndrome_order(target: &PauliVector, links: &[PauliVector], budget: SyndromeBudget) -> Result<SyndromeOutcome, PauliError> {
    let n = target.n();
    if let Some(l) = links.iter().find(|l| l.n() != n) {
        return Err(PauliError::SizeMismatch(n, l.n()));
    }
    // repeated operators only add trivial decompositions
    let mut seen_ops: HashSet<&PauliVector> = HashSet::new();
    let unique: Vec<usize> = (0..links.len()).filter(|&i| seen_ops.insert(&links[i])).collect();
    let rows: Vec<Bits> = unique.iter().map(|&i| links[i].to_bits()).collect();
    let dec = Decomposer::new(2 * n, &rows);
    let particular = dec.solve(&target.to_bits()).ok_or(PauliError::NotInSpan)?;
    let kernel = dec.relations().to_vec();
    let mut solutions: Vec<Bits> = Vec::new();
    let limit = budget.decompositions;
    if kernel.len() < usize::BITS as usize && (1usize << kernel.len()) <= limit {
        for mask in 0..(1usize << kernel.len()) {
            let mut s = particular.clone();
            for (i, k) in kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.xor_assign(k);
                }
            }
            solutions.push(s);
        }
    } else {
        // greedy walk over kernel combinations that keeps the smallest decompositions seen
        let mut seen: HashSet<Bits> = HashSet::new();
        let mut frontier = vec![particular.clone()];
        seen.insert(particular);
        while let Some(s) = frontier.pop() {
            solutions.push(s.clone());
            if solutions.len() >= limit {
                break;
            }
            for k in &kernel {
                let t = s.xor(k);
                if t.count_ones() <= s.count_ones() + 2 && seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
            frontier.sort_by_key(|b| std::cmp::Reverse(b.count_ones()));
        }
    }
    solutions.sort_by_key(|s| (s.count_ones(), s.iter_ones().collect::<Vec<_>>()));
    let mut exhausted = false;
    for sol in &solutions {
        let idx: Vec<usize> = sol.iter_ones().map(|j| unique[j]).collect();
        let mut nodes = 0usize;
        match order_subset(&idx, links, &mut nodes, budget.nodes) {
            Some(Some(order)) => return Ok(SyndromeOutcome::Found(order)),
            Some(None) => {}
            None => exhausted = true,
        }
    }
    let complete = !exhausted && (kernel.len() < usize::BITS as usize && (1usize << kernel.len()) <= limit);
    Ok(if complete { SyndromeOutcome::Infeasible } else { SyndromeOutcome::BudgetExhausted })
}

/// Orders a fixed link set. A link commutes with the running product exactly when it
/// anticommutes with an even number of earlier links, so only the anticommutation graph
/// matters and its components are ordered independently, each by depth-first search with
/// memoized dead states. Returns None when the node budget runs out.
fn order_subset(idx: &[usize], links: &[PauliVector], nodes: &mut usize, budget: usize) -> Option<Option<Vec<usize>>> {
    let m = idx.len();
    let mut adj = vec![Vec::new(); m];
    for a in 0..m {
        for b in a + 1..m {
            if !commutes(&links[idx[a]], &links[idx[b]]).expect("same size") {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut comp = vec![usize::MAX; m];
    let mut order = Vec::with_capacity(m);
    for start in 0..m {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut members = vec![start];
        comp[start] = start;
        let mut i = 0;
        while i < members.len() {
            for &v in &adj[members[i]] {
                if comp[v] == usize::MAX {
                    comp[v] = start;
                    members.push(v);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        match order_component(&members, &adj, nodes, budget)? {
            Some(o) => order.extend(o.into_iter().map(|j| idx[j])),
            None => return Some(None),
        }
    }
    Some(Some(order))
}

/// Peels a component from the back: the last link must anticommute with an even number
/// of the others. Connected pieces left behind are solved separately, pieces with an odd
/// number of anticommuting pairs are dead, and dead sets are memoized.
fn order_component(members: &[usize], adj: &[Vec<usize>], nodes: &mut usize, budget: usize) -> Option<Option<Vec<usize>>> {
    let k = members.len();
    if k > 64 {
        return None;
    }
    let nbr: Vec<u64> = members
        .iter()
        .map(|&v| adj[v].iter().fold(0u64, |m, u| m | 1 << members.binary_search(u).expect("same component")))
        .collect();
    let full: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut peel = Peel { nbr, dead: HashSet::new(), nodes, budget };
    let order = peel.solve(full)?;
    Some(order.map(|o| o.into_iter().map(|j| members[j]).collect()))
}

struct Peel<'a> {
    nbr: Vec<u64>,
    dead: HashSet<u64>,
    nodes: &'a mut usize,
    budget: usize,
}

impl Peel<'_> {
    fn ones(mut m: u64) -> impl Iterator<Item = usize> {
        std::iter::from_fn(move || {
            (m != 0).then(|| {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                i
            })
        })
    }

    fn component(&self, set: u64) -> u64 {
        let mut comp = set & set.wrapping_neg();
        loop {
            let grown = Self::ones(comp).fold(comp, |c, v| c | (self.nbr[v] & set));
            if grown == comp {
                return comp;
            }
            comp = grown;
        }
    }

    fn solve(&mut self, set: u64) -> Option<Option<Vec<usize>>> {
        let mut order = Vec::new();
        let mut rest = set;
        while rest != 0 {
            let comp = self.component(rest);
            rest &= !comp;
            match self.solve_connected(comp)? {
                Some(o) => order.extend(o),
                None => return Some(None),
            }
        }
        Some(Some(order))
    }

    fn solve_connected(&mut self, comp: u64) -> Option<Option<Vec<usize>>> {
        if comp.count_ones() == 1 {
            return Some(Some(vec![comp.trailing_zeros() as usize]));
        }
        let degree = |v: usize| (self.nbr[v] & comp).count_ones();
        let pairs: u32 = Self::ones(comp).map(degree).sum::<u32>() / 2;
        if pairs % 2 == 1 || self.dead.contains(&comp) {
            return Some(None);
        }
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return None;
        }
        let mut cands: Vec<usize> = Self::ones(comp).filter(|&v| degree(v) % 2 == 0).collect();
        cands.sort_by_key(|&v| std::cmp::Reverse(degree(v)));
        for v in cands {
            if let Some(mut o) = self.solve(comp & !(1 << v))? {
                o.push(v);
                return Some(Some(o));
            }
        }
        self.dead.insert(comp);
        Some(None)
    }
}

/// Links of the derived ordinary graph with both ends on the cycle's vertices.
pub fn cycle_links(h: &Hypergraph, cycle: &Bits) -> Vec<PauliVector> {
    let mut on = vec![false; h.vertex_count];
    for i in cycle.iter_ones() {
        for &v in h.edge(i).support() {
            on[v] = true;
        }
    }
    gauge_links(h).into_iter().filter(|(_, [a, b], _)| on[*a] && on[*b]).map(|x| x.2).collect()
}

/// Minimum weight of an operator commuting with S but outside G, searched by weight up to
/// `weight_cap`.
pub fn brute_min_dressed_weight(analysis: &GroupAnalysis, weight_cap: usize) -> Result<Option<usize>, PauliError> {
    if analysis.k == 0 {
        return Err(PauliError::NoLogicalQubits);
    }
    let n = analysis.n;
    let stab: Vec<PauliVector> = analysis.stabilizer.basis().iter().map(PauliVector::from_bits).collect();
    for w in 1..=weight_cap.min(n) {
        let mut support: Vec<usize> = (0..w).collect();
        loop {
            for letters in 0..3usize.pow(w as u32) {
                let mut p = PauliVector::identity(n);
                let mut l = letters;
                for &q in &support {
                    p.apply(['X', 'Y', 'Z'][l % 3], q);
                    l /= 3;
                }
                if stab.iter().all(|s| commutes(s, &p).expect("same size")) && !member(&analysis.gauge, &p) {
                    return Ok(Some(w));
                }
            }
            // next w-subset in lexicographic order
            let mut i = w;
            while i > 0 && support[i - 1] == n - w + i - 1 {
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
    Ok(None)
}
