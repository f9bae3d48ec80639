//! Test-only maps: regular maps from small matrix groups and the Petersen graph.
#![allow(dead_code)]

use std::collections::HashMap;

use tesscode::hypergraph::{Hypergraph, Link};
use tesscode::surface_map::{CombinatorialMap, FaceColor};

type Mat = [[u8; 2]; 2];

fn mul(a: Mat, b: Mat, p: u8) -> Mat {
    let mut c = [[0u8; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = ((0..2).map(|k| a[i][k] as u32 * b[k][j] as u32).sum::<u32>() % p as u32) as u8;
        }
    }
    c
}

/// Map whose darts are the elements of the group generated by `a` and `b`, with
/// sigma(g) = g·b and alpha(g) = g·a. `canon` picks a representative (sign for PSL).
fn group_map(a: Mat, b: Mat, p: u8, canon: &dyn Fn(Mat) -> Mat) -> CombinatorialMap {
    let id = canon([[1, 0], [0, 1]]);
    let mut index: HashMap<Mat, usize> = HashMap::from([(id, 0)]);
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        for g in [a, b] {
            let h = canon(mul(elems[i], g, p));
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(h) {
                e.insert(elems.len());
                elems.push(h);
            }
        }
        i += 1;
    }
    let sigma = elems.iter().map(|&g| index[&canon(mul(g, b, p))]).collect();
    let alpha = elems.iter().map(|&g| index[&canon(mul(g, a, p))]).collect();
    CombinatorialMap::new(sigma, alpha).expect("group map is valid")
}

/// Klein quartic as the regular map {7,3} of genus 3 on PSL(2,7).
pub fn klein_quartic() -> CombinatorialMap {
    let canon = |m: Mat| {
        let neg = m.map(|r| r.map(|x| (7 - x) % 7));
        let key = |m: &Mat| [m[0][0], m[0][1], m[1][0], m[1][1]];
        if key(&neg) < key(&m) { neg } else { m }
    };
    group_map([[0, 6], [1, 0]], [[0, 6], [1, 1]], 7, &canon)
}

fn order(g: Mat, p: u8) -> usize {
    let mut x = g;
    let mut k = 1;
    while x != [[1, 0], [0, 1]] {
        x = mul(x, g, p);
        k += 1;
    }
    k
}

/// Bolza surface as the regular map {8,3} of genus 2 on GL(2,3).
pub fn bolza() -> CombinatorialMap {
    let all: Vec<Mat> = (0..81u32)
        .map(|c| [[(c % 3) as u8, (c / 3 % 3) as u8], [(c / 9 % 3) as u8, (c / 27) as u8]])
        .filter(|m| (m[0][0] as i32 * m[1][1] as i32 - m[0][1] as i32 * m[1][0] as i32).rem_euclid(3) != 0)
        .collect();
    for &a in &all {
        if order(a, 3) != 2 {
            continue;
        }
        for &b in &all {
            if order(b, 3) == 3 && order(mul(a, b, 3), 3) == 8 {
                let map = group_map(a, b, 3, &|m| m);
                if map.dart_count() == 48 {
                    return map;
                }
            }
        }
    }
    unreachable!("GL(2,3) holds a (2,3,8) generating pair")
}

/// Petersen graph with rank-2 edges only, colored greedily; it admits no proper 3-edge-coloring.
pub fn petersen() -> Hypergraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push([i, (i + 1) % 5]);
        edges.push([i, i + 5]);
        edges.push([5 + i, 5 + (i + 2) % 5]);
    }
    let mut used = vec![Vec::new(); 10];
    let mut rank2 = Vec::new();
    for [u, v] in edges {
        let color = [FaceColor::R, FaceColor::G, FaceColor::B]
            .into_iter()
            .find(|c| !used[u].contains(c) && !used[v].contains(c))
            .unwrap_or(FaceColor::R);
        used[u].push(color);
        used[v].push(color);
        rank2.push(Link { ends: [u, v], color });
    }
    Hypergraph {
        vertex_count: 10,
        rank2,
        rank3: Vec::new(),
        construction: "petersen".into(),
        source: String::new(),
        embedding: None,
    }
}

fn toy(vertex_count: usize, links: &[(usize, usize, FaceColor)], rank3: Vec<[usize; 3]>) -> Hypergraph {
    Hypergraph {
        vertex_count,
        rank2: links.iter().map(|&(u, v, color)| Link { ends: [u, v], color }).collect(),
        rank3,
        construction: "toy".into(),
        source: String::new(),
        embedding: None,
    }
}

/// K4 with its three perfect matchings colored R, G, B.
pub fn k4() -> Hypergraph {
    use FaceColor::*;
    toy(4, &[(0, 1, R), (2, 3, R), (0, 2, G), (1, 3, G), (0, 3, B), (1, 2, B)], Vec::new())
}

/// Triangular prism with rank-2 edges only.
pub fn prism() -> Hypergraph {
    use FaceColor::*;
    toy(6, &[(0, 1, R), (1, 2, G), (2, 0, B), (3, 4, R), (4, 5, G), (5, 3, B), (0, 3, G), (1, 4, B), (2, 5, R)], Vec::new())
}

/// Two triangles joined by an alternating R/G hexagon of links.
pub fn two_triangles() -> Hypergraph {
    use FaceColor::*;
    toy(6, &[(0, 3, R), (1, 4, R), (2, 5, R), (0, 4, G), (1, 5, G), (2, 3, G)], vec![[0, 1, 2], [3, 4, 5]])
}

/// Cube graph with rank-2 edges only, colored by direction.
pub fn cube() -> Hypergraph {
    use FaceColor::*;
    let mut links = Vec::new();
    for v in 0..8usize {
        for (bit, c) in [(1, R), (2, G), (4, B)] {
            if v & bit == 0 {
                links.push((v, v | bit, c));
            }
        }
    }
    toy(8, &links, Vec::new())
}

/// One reference parameter row; `branch` is Some(true) for the tripartite family-2 line.
#[derive(Clone, Debug)]
pub struct ReferenceRow {
    pub family: u8,
    pub branch: Option<bool>,
    pub g: i64,
    pub class: Vec<i64>,
    pub snkr: (i64, i64, i64, i64),
}

pub fn reference_rows() -> Vec<ReferenceRow> {
    include_str!("../data/reference_rows.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            let (family, branch) = match f[0] {
                "2t" => (2, Some(true)),
                "2n" => (2, Some(false)),
                x => (x.parse().unwrap(), None),
            };
            let num = |i: usize| f[i].parse::<i64>().unwrap();
            ReferenceRow {
                family,
                branch,
                g: num(1),
                class: f[2].split(',').map(|x| x.parse().unwrap()).collect(),
                snkr: (num(3), num(4), num(5), num(6)),
            }
        })
        .collect()
}
