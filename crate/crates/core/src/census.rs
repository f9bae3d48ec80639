//! Closed-form counts and code parameters for every family, plus table emission.

use std::fmt;

use thiserror::Error;

use crate::surface_map::{CombinatorialMap, FaceColor, FaceColoring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("nonpositive denominator {0}: the class is not hyperbolic")]
    NonPositiveDenominator(i64),
    #[error("non-integral {what}: {num}/{den}")]
    NonIntegral { what: &'static str, num: i64, den: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parity violation: {0} is not an integer")]
    Parity(&'static str),
    #[error("inconsistent accounting: n={n} but k+r+s={sum}")]
    Inconsistent { n: i64, sum: i64 },
}

fn exact(what: &'static str, num: i64, den: i64) -> Result<i64, CensusError> {
    if num % den != 0 {
        return Err(CensusError::NonIntegral { what, num, den });
    }
    Ok(num / den)
}

fn half(what: &'static str, x: i64) -> Result<i64, CensusError> {
    if x % 2 != 0 {
        return Err(CensusError::Parity(what));
    }
    Ok(x / 2)
}

/// Face, edge and vertex counts of a trivalent tessellation {2p1,2p2,2p3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemiRegularCounts {
    pub n_f: i64,
    pub n_e: i64,
    pub n_v: i64,
    pub f_r: i64,
    pub f_g: i64,
    pub f_b: i64,
    pub chi: i64,
    pub genus: i64,
}

impl SemiRegularCounts {
    /// Counts read off a colored map.
    pub fn from_map(map: &CombinatorialMap, coloring: &FaceColoring) -> Self {
        let f = |c| coloring.faces_of(c).len() as i64;
        let chi = map.euler_characteristic();
        SemiRegularCounts {
            n_f: map.face_count() as i64,
            n_e: map.edge_count() as i64,
            n_v: map.vertex_count() as i64,
            f_r: f(FaceColor::R),
            f_g: f(FaceColor::G),
            f_b: f(FaceColor::B),
            chi,
            genus: (2 - chi) / 2,
        }
    }
}

pub fn counts_2p2q2r(p1: i64, p2: i64, p3: i64, g: i64) -> Result<SemiRegularCounts, CensusError> {
    if p1 < 2 || p2 < 2 || p3 < 2 {
        return Err(CensusError::Precondition(format!("p values must be at least 2, got ({p1},{p2},{p3})")));
    }
    if g < 2 {
        return Err(CensusError::Precondition(format!("genus must be at least 2, got {g}")));
    }
    let d = p1 * p2 * p3 - p1 * p2 - p1 * p3 - p2 * p3;
    if d <= 0 {
        return Err(CensusError::NonPositiveDenominator(d));
    }
    let h = g - 1;
    Ok(SemiRegularCounts {
        n_f: exact("N_f", 2 * (p1 * p2 + p1 * p3 + p2 * p3) * h, d)?,
        n_e: exact("N_e", 6 * p1 * p2 * p3 * h, d)?,
        n_v: exact("N_v", 4 * p1 * p2 * p3 * h, d)?,
        f_r: exact("F_R", 2 * p2 * p3 * h, d)?,
        f_g: exact("F_G", 2 * p1 * p3 * h, d)?,
        f_b: exact("F_B", 2 * p1 * p2 * h, d)?,
        chi: 2 - 2 * g,
        genus: g,
    })
}

/// Counts of a trivalent {p,3} tessellation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct P3Counts {
    pub n_f: i64,
    pub n_e: i64,
    pub n_v: i64,
}

pub fn counts_p3(p: i64, g: i64) -> Result<P3Counts, CensusError> {
    if p <= 6 {
        return Err(CensusError::NonPositiveDenominator(p - 6));
    }
    if g < 2 {
        return Err(CensusError::Precondition(format!("genus must be at least 2, got {g}")));
    }
    let h = g - 1;
    Ok(P3Counts {
        n_f: exact("n_f", 12 * h, p - 6)?,
        n_e: exact("n_e", 6 * p * h, p - 6)?,
        n_v: exact("n_v", 4 * p * h, p - 6)?,
    })
}

/// (F_P, F_T, F_Q): p-gons, triangles and quadrilaterals of {p,4,3,4}.
pub fn counts_p434(p: i64, g: i64) -> Result<(i64, i64, i64), CensusError> {
    let c = counts_p3(p, g)?;
    Ok((c.n_f, c.n_v, c.n_e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    One,
    Two,
    Three,
    Four,
    Bombin,
    Thm5,
    Thm6,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        Some(match s {
            "1" => Family::One,
            "2" => Family::Two,
            "3" => Family::Three,
            "4" => Family::Four,
            "bombin" => Family::Bombin,
            "thm5" => Family::Thm5,
            "thm6" => Family::Thm6,
            _ => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::One => "1",
            Family::Two => "2",
            Family::Three => "3",
            Family::Four => "4",
            Family::Bombin => "bombin",
            Family::Thm5 => "thm5",
            Family::Thm6 => "thm6",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Formula,
    LinearAlgebra,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: i64,
    pub s: i64,
    pub r: i64,
    pub k: i64,
    pub l_bound: Option<i64>,
    pub family: Family,
    pub provenance: Provenance,
}

impl CodeParams {
    fn checked(family: Family, n: i64, k: i64, r: i64, s: i64) -> Result<Self, CensusError> {
        if n != k + r + s {
            return Err(CensusError::Inconsistent { n, sum: k + r + s });
        }
        if n < 0 || k < 0 || r < 0 || s < 0 {
            return Err(CensusError::Precondition(format!("negative parameter in [[{n},{k},{r}]] s={s}")));
        }
        Ok(CodeParams { n, s, r, k, l_bound: None, family, provenance: Provenance::Formula })
    }

    pub fn is_encoding(&self) -> bool {
        self.k >= 1
    }

    /// Same (n, s, r, k) regardless of provenance and bound.
    pub fn same_numbers(&self, other: &CodeParams) -> bool {
        (self.n, self.s, self.r, self.k) == (other.n, other.s, other.r, other.k)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.l_bound {
            Some(l) => write!(f, "[[{},{},{},d<={}]]", self.n, self.k, self.r, l),
            None => write!(f, "[[{},{},{},d]]", self.n, self.k, self.r),
        }
    }
}

pub fn params_family1_counts(c: &SemiRegularCounts) -> Result<CodeParams, CensusError> {
    let fr_half = half("F_R/2", c.f_r)?;
    let n = c.n_e + 3 * c.f_r;
    let k = -c.chi + 1 + fr_half;
    let r = -c.chi + c.n_v + 5 * fr_half;
    let s = 2 * c.f_r + 2 * c.f_g - 1;
    CodeParams::checked(Family::One, n, k, r, s)
}

pub fn params_family1(p1: i64, p2: i64, g: i64) -> Result<CodeParams, CensusError> {
    if p1 <= 2 || p1 % 2 == 0 {
        return Err(CensusError::Precondition(format!("family 1 needs odd p1 > 2, got {p1}")));
    }
    params_family1_counts(&counts_2p2q2r(p1, p2, 2, g)?)
}

pub fn params_family2_counts(c: &SemiRegularCounts, tripartite: bool) -> Result<CodeParams, CensusError> {
    let delta = tripartite as i64;
    let n = c.n_e;
    let k = c.chi - 3 * c.f_r + half("N_f/2", c.n_f)? + 1 + 2 * delta;
    let r = -c.chi + 2 * c.n_v - half("(N_f+N_e)/2", c.n_f + c.n_e)?;
    let s = 3 * c.f_r + c.f_g - 1 - 2 * delta;
    CodeParams::checked(Family::Two, n, k, r, s)
}

pub fn params_family2(p1: i64, g: i64, tripartite: bool) -> Result<CodeParams, CensusError> {
    if p1 <= 4 || p1 % 2 != 0 {
        return Err(CensusError::Precondition(format!("family 2 needs even p1 > 4, got {p1}")));
    }
    params_family2_counts(&counts_2p2q2r(p1, 2, 3, g)?, tripartite)
}

pub fn params_family3_counts(c: &SemiRegularCounts) -> Result<CodeParams, CensusError> {
    let n = c.n_e + 3 * c.f_r;
    let k = c.chi + half("(N_f-5F_R)/2", c.n_f - 5 * c.f_r)? + 1;
    let r = -c.chi + 2 * c.n_v - half("(N_f+N_e-5F_R)/2", c.n_f + c.n_e - 5 * c.f_r)?;
    let s = 3 * c.f_r + c.f_g - 1;
    CodeParams::checked(Family::Three, n, k, r, s)
}

pub fn params_family3(p1: i64, g: i64) -> Result<CodeParams, CensusError> {
    if p1 <= 6 || p1 % 2 == 0 {
        return Err(CensusError::Precondition(format!("family 3 needs odd p1 > 6, got {p1}")));
    }
    params_family3_counts(&counts_2p2q2r(p1, 2, 3, g)?)
}

/// Family 4 from the face counts (F_P, F_T) of {p,4,3,4}.
pub fn params_family4_counts(p: i64, f_p: i64, f_t: i64) -> Result<CodeParams, CensusError> {
    let n = (p + 3) * f_p;
    let k = half("(F_T-F_P)/2", f_t - f_p)?;
    let r = half("(5F_T+3F_P)/2", 5 * f_t + 3 * f_p)?;
    CodeParams::checked(Family::Four, n, k, r, 2 * f_p)
}

pub fn params_family4(p: i64, g: i64) -> Result<CodeParams, CensusError> {
    if p < 7 || p % 2 == 0 {
        return Err(CensusError::Precondition(format!("family 4 needs odd p >= 7, got {p}")));
    }
    let (f_p, f_t, _) = counts_p434(p, g)?;
    params_family4_counts(p, f_p, f_t)
}

pub fn params_bombin(v_star: i64, f_star: i64, chi: i64) -> Result<CodeParams, CensusError> {
    if v_star <= 0 || f_star <= 0 {
        return Err(CensusError::Precondition("V* and F* must be positive".into()));
    }
    CodeParams::checked(Family::Bombin, 3 * f_star, 2 - chi, 2 * f_star - chi, 2 * v_star - 2)
}

pub fn params_thm5(e: i64, chi: i64, bipartite: bool) -> Result<CodeParams, CensusError> {
    if e <= 0 {
        return Err(CensusError::Precondition("edge count must be positive".into()));
    }
    let delta = bipartite as i64;
    let (n, k, r) = (6 * e, 1 + delta - chi, 4 * e - chi);
    CodeParams::checked(Family::Thm5, n, k, r, n - k - r)
}

pub fn params_thm6(e: i64, chi: i64, bipartite: bool) -> Result<CodeParams, CensusError> {
    if e <= 0 {
        return Err(CensusError::Precondition("edge count must be positive".into()));
    }
    let delta = bipartite as i64;
    let (n, k, r) = (10 * e, 1 + delta - chi, 6 * e - chi);
    CodeParams::checked(Family::Thm6, n, k, r, n - k - r)
}

/// One table line: a tessellation class at a genus with one or two parameter sets
/// (family 2 carries the tripartite and non-tripartite branches, in that order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub g: i64,
    pub class: Vec<i64>,
    pub params: Vec<CodeParams>,
}

impl TableRow {
    pub fn class_label(&self) -> String {
        let parts: Vec<String> = self.class.iter().map(|x| x.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Tab-separated `g class s n k r d_bound` lines, one per parameter set.
    pub fn tsv_lines(&self) -> Vec<String> {
        self.params
            .iter()
            .map(|p| {
                let d = p.l_bound.map_or_else(|| "?".to_string(), |l| l.to_string());
                format!("{}\t{}\t{}\t{}\t{}\t{}\t{}", self.g, self.class_label(), p.s, p.n, p.k, p.r, d)
            })
            .collect()
    }

    /// `key=value` lines mirroring the tab-separated fields.
    pub fn kv_lines(&self) -> Vec<String> {
        self.params
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = p.l_bound.map_or_else(|| "?".to_string(), |l| l.to_string());
                let branch = if self.params.len() > 1 { format!(" branch={}", i + 1) } else { String::new() };
                format!(
                    "family={} g={} class={}{} s={} n={} k={} r={} d_bound={}",
                    p.family,
                    self.g,
                    self.class_label(),
                    branch,
                    p.s,
                    p.n,
                    p.k,
                    p.r,
                    d
                )
            })
            .collect()
    }
}

/// Largest p value that can give at least one face per color at genus `g`.
fn p_limit(g: i64) -> i64 {
    12 * g + 12
}

fn rows_for_genus(family: Family, g: i64) -> Vec<TableRow> {
    let lim = p_limit(g);
    let mut rows = Vec::new();
    match family {
        Family::One => {
            for p1 in (3..=lim).step_by(2) {
                for p2 in 2..=lim {
                    if let Ok(p) = params_family1(p1, p2, g) {
                        if p.s >= 1 {
                            rows.push(TableRow { g, class: vec![2 * p1, 2 * p2, 4], params: vec![p] });
                        }
                    }
                }
            }
        }
        Family::Two => {
            for p1 in (6..=lim).step_by(2) {
                if let (Ok(a), Ok(b)) = (params_family2(p1, g, true), params_family2(p1, g, false)) {
                    rows.push(TableRow { g, class: vec![2 * p1, 4, 6], params: vec![a, b] });
                }
            }
        }
        Family::Three => {
            for p1 in (7..=lim).step_by(2) {
                if let Ok(p) = params_family3(p1, g) {
                    rows.push(TableRow { g, class: vec![2 * p1, 4, 6], params: vec![p] });
                }
            }
        }
        Family::Four => {
            for p in (7..=lim).step_by(2) {
                if let Ok(c) = params_family4(p, g) {
                    rows.push(TableRow { g, class: vec![p, 4, 3, 4], params: vec![c] });
                }
            }
        }
        Family::Bombin | Family::Thm5 | Family::Thm6 => {}
    }
    // descending n, ties by ascending class
    rows.sort_by(|a, b| b.params[0].n.cmp(&a.params[0].n).then_with(|| a.class.cmp(&b.class)));
    rows
}

/// Every admissible class of the family for each genus in the range, sorted by genus and
/// then by descending n. Families without a closed-form class census give no rows.
pub fn emit_table(family: Family, genus: std::ops::RangeInclusive<i64>) -> Vec<TableRow> {
    genus.flat_map(|g| rows_for_genus(family, g)).collect()
}
