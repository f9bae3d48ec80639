//! Dense GF(2) vectors and subspaces kept in reduced row echelon form.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, idx: I) -> Self {
        let mut b = Bits::zeros(len);
        for i in idx {
            b.flip(i);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if v {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    /// Parity of the bitwise AND.
    #[inline]
    pub fn dot(&self, other: &Bits) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    /// Bits `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> Bits {
        Bits::from_indices(len, self.iter_ones().filter(|&i| i >= start && i < start + len).map(|i| i - start))
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &Bits) -> Bits {
        let mut r = Bits::zeros(self.len + other.len);
        for i in self.iter_ones() {
            r.set(i, true);
        }
        for i in other.iter_ones() {
            r.set(self.len + i, true);
        }
        r
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A subspace of GF(2)^len stored as a reduced row echelon basis.
/// The pivot of each row is its lowest set bit and no other row has that bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    len: usize,
    rows: Vec<Bits>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(len: usize) -> Self {
        Subspace { len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span<'a, I: IntoIterator<Item = &'a Bits>>(len: usize, gens: I) -> Self {
        let mut s = Subspace::new(len);
        for g in gens {
            s.insert(g.clone());
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Bits] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &mut Bits) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
    }

    pub fn contains(&self, v: &Bits) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v` to the span; returns true when the rank grew.
    pub fn insert(&mut self, mut v: Bits) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        self.reduce(&mut v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for row in self.rows.iter_mut() {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // Zassenhaus: rows [a|a] and [b|0]; rows with zero left half span the intersection.
        let n = self.len;
        let zero = Bits::zeros(n);
        let mut big = Subspace::new(2 * n);
        for a in &self.rows {
            big.insert(a.concat(a));
        }
        for b in &other.rows {
            big.insert(b.concat(&zero));
        }
        let mut out = Subspace::new(n);
        for (row, &p) in big.rows.iter().zip(&big.pivots) {
            if p >= n {
                out.insert(row.slice(n, n));
            }
        }
        out
    }

    /// Vectors `x` with `r . x = 0` for every basis row `r`.
    pub fn annihilator(&self) -> Subspace {
        let mut out = Subspace::new(self.len);
        let mut is_pivot = vec![false; self.len];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        for (f, _) in is_pivot.iter().enumerate().filter(|(_, &b)| !b) {
            let mut x = Bits::zeros(self.len);
            x.set(f, true);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if row.get(f) {
                    x.set(p, true);
                }
            }
            out.insert(x);
        }
        out
    }

    /// Basis of a complement of `self` inside `sup`, assuming `self` is a subspace of `sup`.
    pub fn complement_in(&self, sup: &Subspace) -> Vec<Bits> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for r in &sup.rows {
            if acc.insert(r.clone()) {
                out.push(r.clone());
            }
        }
        out
    }
}

/// Nullspace of the linear map whose matrix rows are `rows`, each of length `ncols`.
pub fn nullspace(rows: &[Bits], ncols: usize) -> Subspace {
    Subspace::span(ncols, rows).annihilator()
}

/// Expresses vectors as combinations of a fixed generator list.
#[derive(Clone, Debug)]
pub struct Decomposer {
    len: usize,
    ngens: usize,
    rows: Vec<(Bits, Bits)>,
    pivots: Vec<usize>,
    kernel: Vec<Bits>,
}

impl Decomposer {
    pub fn new(len: usize, gens: &[Bits]) -> Self {
        let ngens = gens.len();
        let mut d = Decomposer { len, ngens, rows: Vec::new(), pivots: Vec::new(), kernel: Vec::new() };
        for (i, g) in gens.iter().enumerate() {
            let mut v = g.clone();
            let mut c = Bits::zeros(ngens);
            c.set(i, true);
            d.reduce_pair(&mut v, &mut c);
            match v.first_one() {
                None => d.kernel.push(c),
                Some(p) => {
                    for (row, comb) in d.rows.iter_mut() {
                        if row.get(p) {
                            row.xor_assign(&v);
                            comb.xor_assign(&c);
                        }
                    }
                    let at = d.pivots.partition_point(|&q| q < p);
                    d.pivots.insert(at, p);
                    d.rows.insert(at, (v, c));
                }
            }
        }
        d
    }

    fn reduce_pair(&self, v: &mut Bits, c: &mut Bits) {
        for ((row, comb), &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
                c.xor_assign(comb);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    /// Combination vectors summing to zero: a basis of the relations among the generators.
    pub fn relations(&self) -> &[Bits] {
        &self.kernel
    }

    /// Some combination of generators equal to `v`, if one exists.
    pub fn solve(&self, v: &Bits) -> Option<Bits> {
        let mut w = v.clone();
        let mut c = Bits::zeros(self.ngens);
        self.reduce_pair(&mut w, &mut c);
        w.is_zero().then_some(c)
    }
}
