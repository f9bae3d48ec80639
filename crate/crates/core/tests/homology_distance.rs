use proptest::prelude::*;
use tesscode::builders::{build_bombin, build_family1, build_family2};
use tesscode::gf2::{nullspace, Bits};
use tesscode::homology::*;
use tesscode::hypergraph::{FaceRegistry, Hypergraph};
use tesscode::surface_map::{torus_tessellation, CombinatorialMap};

fn torus(family: &str, m: usize, n: usize) -> (CombinatorialMap, Hypergraph, FaceRegistry) {
    let (class, build): ([usize; 3], fn(&_, &_) -> _) = match family {
        "family1" => ([6, 12, 4], build_family1),
        "family2" => ([12, 4, 6], build_family2),
        _ => ([6, 6, 6], build_bombin),
    };
    let (map, col) = torus_tessellation(class, m, n).unwrap();
    let (h, reg) = build(&map, &col).unwrap();
    (map, h, reg)
}

fn triangles(h: &Hypergraph, c: &Bits) -> usize {
    c.iter_ones().filter(|&e| h.is_triangle(e)).count()
}

#[test]
fn torus_surface_homology_has_rank_two() {
    for fam in ["family1", "family2", "bombin"] {
        let (_, h, reg) = torus(fam, 2, 2);
        let d = HomologyDecomposition::new(&h, HomologyMode::Surface).unwrap();
        assert_eq!(d.h1_dim, 2, "{fam}");
        assert!(d.boundary.is_subspace_of(&d.cycle), "{fam}");
        assert_eq!(d.cycle.rank() - d.boundary.rank(), d.h1_dim, "{fam}");
        for b in d.boundary.basis() {
            assert!(d.is_trivial(&h, b).unwrap(), "{fam}");
        }
        for c in &reg.cycles {
            let m = h.edge_set(c.edges.iter().copied());
            assert!(d.is_trivial(&h, &m).unwrap(), "{fam} {}", c.tag());
        }
    }
}

#[test]
fn auto_mode_prefers_the_surface() {
    let (_, h, _) = torus("bombin", 2, 2);
    assert_eq!(HomologyDecomposition::new(&h, HomologyMode::Auto).unwrap().mode, HomologyMode::Surface);
}

#[test]
fn non_cycles_are_rejected() {
    let (_, h, _) = torus("bombin", 2, 2);
    let d = HomologyDecomposition::new(&h, HomologyMode::Surface).unwrap();
    assert_eq!(d.homology_class(&h, &h.edge_set([0])), Err(HomologyError::NotACycle));
}

#[test]
fn triangle_bound_on_family1_torus() {
    let (_, h, _) = torus("family1", 2, 2);
    for mode in [HomologyMode::Surface, HomologyMode::Stabilizer] {
        let d = HomologyDecomposition::new(&h, mode).unwrap();
        let t = min_triangles_nontrivial(&h, &d, 5_000_000).unwrap();
        assert_eq!(t.l, 4, "{mode:?}");
        assert!(t.proven_optimal);
        assert!(!d.is_trivial(&h, &t.witness).unwrap());
        assert_eq!(triangles(&h, &t.witness), t.l);
    }
}

#[test]
fn triangle_bound_on_family2_torus_is_even() {
    let (_, h, _) = torus("family2", 2, 2);
    let d = HomologyDecomposition::new(&h, HomologyMode::Surface).unwrap();
    let t = min_triangles_nontrivial(&h, &d, 5_000_000).unwrap();
    assert_eq!(t.l % 2, 0);
    assert!(!d.is_trivial(&h, &t.witness).unwrap());
    assert_eq!(triangles(&h, &t.witness), t.l);
}

#[test]
fn triangle_search_matches_exhaustive_on_small_bombin() {
    let (_, h, _) = torus("bombin", 1, 1);
    assert_eq!(h.edge_count(), 24);
    let d = HomologyDecomposition::new(&h, HomologyMode::Surface).unwrap();
    let fast = min_triangles_nontrivial(&h, &d, 1_000_000).unwrap();
    assert_eq!(Some(fast.l), min_triangles_exhaustive(&h, &d).unwrap());
}

#[test]
fn trivial_homology_is_an_error() {
    let (_, h, _) = torus("family2", 2, 2);
    let d = HomologyDecomposition::new(&h, HomologyMode::Stabilizer).unwrap();
    assert_eq!(d.h1_dim, 0);
    assert_eq!(min_triangles_nontrivial(&h, &d, 1000), Err(HomologyError::TrivialHomology));
}

/// Shortest dual cycle with odd intersection against some primal cycle, found by listing
/// every simple dual cycle up to `max_len` edges.
fn brute_dual_distance(map: &CombinatorialMap, max_len: usize) -> Option<usize> {
    let m = map.edge_count();
    let mut inc = vec![Bits::zeros(m); map.vertex_count()];
    for e in 0..m {
        let [a, b] = map.edge_ends(e);
        inc[a].flip(e);
        inc[b].flip(e);
    }
    let primal = nullspace(&inc, m);
    let nontrivial = |c: &Bits| primal.basis().iter().any(|z| z.dot(c));
    let faces = map.face_count();
    let mut adj = vec![Vec::new(); faces];
    for e in 0..m {
        let [a, b] = map.edge_faces(e);
        adj[a].push((b, e));
        if a != b {
            adj[b].push((a, e));
        }
    }
    let mut best: Option<usize> = None;
    // cycles are rooted at their smallest face
    #[allow(clippy::too_many_arguments)]
    fn walk(
        root: usize,
        u: usize,
        adj: &[Vec<(usize, usize)>],
        on_path: &mut Vec<bool>,
        edges: &mut Bits,
        len: usize,
        max_len: usize,
        found: &mut dyn FnMut(&Bits, usize),
    ) {
        for &(v, e) in &adj[u] {
            if edges.get(e) || v < root {
                continue;
            }
            if v == root {
                edges.flip(e);
                found(edges, len + 1);
                edges.flip(e);
            } else if !on_path[v] && len + 1 < max_len {
                on_path[v] = true;
                edges.flip(e);
                walk(root, v, adj, on_path, edges, len + 1, max_len, found);
                edges.flip(e);
                on_path[v] = false;
            }
        }
    }
    for root in 0..faces {
        let mut on_path = vec![false; faces];
        on_path[root] = true;
        let mut edges = Bits::zeros(m);
        let mut found = |c: &Bits, len: usize| {
            if best.is_none_or(|b| len < b) && nontrivial(c) {
                best = Some(len);
            }
        };
        walk(root, root, &adj, &mut on_path, &mut edges, 0, max_len, &mut found);
    }
    best
}

#[test]
fn dual_distance_matches_brute_force() {
    for (m, n) in [(1, 1), (2, 2), (2, 1)] {
        let (map, _) = torus_tessellation([6, 6, 6], m, n).unwrap();
        let dual = DualHomology::new(&map);
        assert_eq!(dual.h1_dim(), 2);
        assert_eq!(dual.shortest_nontrivial(), brute_dual_distance(&map, 8), "{m}x{n}");
    }
}

#[test]
fn bombin_bounds_on_tori() {
    let (map, h, _) = torus("bombin", 2, 2);
    let b = bombin_bounds(&h, &map, 5_000_000).unwrap();
    assert_eq!((b.d_t.l, b.d_l), (4, 4));
    assert!(b.d_l <= b.d_t.l);
    let dl = |m, n| {
        let (map, _) = torus_tessellation([6, 6, 6], m, n).unwrap();
        DualHomology::new(&map).shortest_nontrivial().unwrap()
    };
    assert!(dl(4, 4) > dl(2, 2));
    assert!(dl(4, 2) >= dl(2, 2));
    let (map, h, _) = torus("family1", 2, 2);
    assert!(matches!(bombin_bounds(&h, &map, 10), Err(HomologyError::NotBombin(_))));
}

#[test]
fn report_row_format() {
    let (_, h, _) = torus("bombin", 2, 2);
    let d = HomologyDecomposition::new(&h, HomologyMode::Surface).unwrap();
    let t = min_triangles_nontrivial(&h, &d, 1_000_000).unwrap();
    let row = d.report_row(&h, &t.witness).unwrap();
    let parts: Vec<&str> = row.split(' ').collect();
    assert_eq!(parts.len(), 3);
    let class = parts[0].strip_prefix("class=").unwrap();
    assert_eq!(class.len(), 2);
    assert!(class.contains('1') && class.chars().all(|c| c == '0' || c == '1'));
    assert_eq!(parts[1], format!("triangles={}", t.l));
    let listed: Vec<usize> = parts[2].strip_prefix("edges=").unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(listed, t.witness.iter_ones().collect::<Vec<_>>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn classes_are_linear(seed_a in any::<u64>(), seed_b in any::<u64>()) {
        let (_, h, _) = torus("bombin", 1, 1);
        let d = HomologyDecomposition::new(&h, HomologyMode::Surface).unwrap();
        let pick = |seed: u64| {
            let mut c = Bits::zeros(h.edge_count());
            for (i, b) in d.cycle.basis().iter().enumerate() {
                if seed >> (i % 64) & 1 == 1 {
                    c.xor_assign(b);
                }
            }
            c
        };
        let (a, b) = (pick(seed_a), pick(seed_b));
        let sum = d.homology_class(&h, &a.xor(&b)).unwrap();
        prop_assert_eq!(sum, d.homology_class(&h, &a).unwrap().xor(&d.homology_class(&h, &b).unwrap()));
        prop_assert_eq!(triangles(&h, &a) % 2, 0);
    }
}
