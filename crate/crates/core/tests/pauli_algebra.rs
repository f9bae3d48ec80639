mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tesscode::builders::{build_bombin, build_family1, build_family2, build_family4};
use tesscode::gf2::Bits;
use tesscode::homology::cycle_space;
use tesscode::hypergraph::{FaceRegistry, Hypergraph};
use tesscode::pauli::*;
use tesscode::surface_map::{color_by_size, torus_tessellation, FaceColor};

fn family1_torus() -> (Hypergraph, FaceRegistry) {
    let (map, col) = torus_tessellation([6, 12, 4], 2, 2).unwrap();
    build_family1(&map, &col).unwrap()
}

fn family2_torus() -> (Hypergraph, FaceRegistry) {
    let (map, col) = torus_tessellation([12, 4, 6], 2, 2).unwrap();
    build_family2(&map, &col).unwrap()
}

fn bombin_torus() -> (Hypergraph, FaceRegistry) {
    let (map, col) = torus_tessellation([6, 6, 6], 2, 2).unwrap();
    build_bombin(&map, &col).unwrap()
}

fn bolza_family1() -> (Hypergraph, FaceRegistry) {
    let (inf, _, _) = common::bolza().inflate_trivalent();
    let col = color_by_size(&inf, [6, 16, 4]).unwrap();
    build_family1(&inf, &col).unwrap()
}

fn klein_family4() -> (Hypergraph, FaceRegistry) {
    build_family4(&common::klein_quartic()).unwrap()
}

fn all_builds() -> Vec<(&'static str, Hypergraph, FaceRegistry)> {
    vec![
        ("family1 torus", family1_torus().0, family1_torus().1),
        ("family2 torus", family2_torus().0, family2_torus().1),
        ("bombin torus", bombin_torus().0, bombin_torus().1),
        ("family1 bolza", bolza_family1().0, bolza_family1().1),
        ("family4 klein", klein_family4().0, klein_family4().1),
    ]
}

fn masks(p: &PauliVector) -> (u32, u32) {
    let m = |b: &Bits| b.iter_ones().fold(0u32, |acc, q| acc | 1 << q);
    (m(&p.x), m(&p.z))
}

/// Counts every phase-free Pauli commuting with the gauge links and checks each against
/// the computed centralizer.
fn brute_centralizer_matches(h: &Hypergraph) {
    let n = h.vertex_count;
    assert!(n <= 12);
    let gens: Vec<(u32, u32)> = gauge_links(h).iter().map(|(_, _, p)| masks(p)).collect();
    let a = GroupAnalysis::from_generators(n, &gauge_links(h).into_iter().map(|x| x.2).collect::<Vec<_>>()).unwrap();
    let mut count = 0u64;
    for x in 0..1u32 << n {
        for z in 0..1u32 << n {
            let ok = gens.iter().all(|&(gx, gz)| ((x & gz).count_ones() + (z & gx).count_ones()) % 2 == 0);
            if ok {
                count += 1;
                let p = PauliVector {
                    x: Bits::from_indices(n, (0..n).filter(|q| x >> q & 1 == 1)),
                    z: Bits::from_indices(n, (0..n).filter(|q| z >> q & 1 == 1)),
                };
                assert!(member(&a.centralizer, &p), "{p} commutes with G but is not in C(G)");
            }
        }
    }
    assert_eq!(count, 1u64 << a.centralizer.rank());
}

#[test]
fn toy_centralizers_match_brute_force_and_loops() {
    for h in [common::k4(), common::prism(), common::two_triangles(), common::cube()] {
        assert!(h.validate().passes(), "{:?}", h.validate().lines());
        brute_centralizer_matches(&h);
        let rep = verify_gloop_identity(&h);
        assert!(rep.holds(), "{rep:?}");
    }
}

#[test]
fn torus_gloop_identity() {
    for (h, _) in [family1_torus(), family2_torus(), bombin_torus()] {
        let rep = verify_gloop_identity(&h);
        assert!(rep.holds(), "{rep:?}");
    }
}

#[test]
fn edge_pairs_follow_the_commutation_rule() {
    for (name, h, _) in all_builds() {
        let ops: Vec<PauliVector> = (0..h.edge_count()).map(|i| edge_operator(&h, i).unwrap()).collect();
        for a in 0..ops.len() {
            for b in a + 1..ops.len() {
                assert_eq!(commutes(&ops[a], &ops[b]).unwrap(), !eta(&h, a, b), "{name}: edges {a} {b}");
            }
        }
        assert_eq!(commutation_violation(&h), None, "{name}");
    }
}

#[test]
fn loop_pairs_follow_shared_triangle_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for (name, h, _) in all_builds() {
        let basis = cycle_space(&h).basis().to_vec();
        let random_cycle = |rng: &mut ChaCha8Rng| {
            let mut c = Bits::zeros(h.edge_count());
            for b in &basis {
                if rng.gen_bool(0.5) {
                    c.xor_assign(b);
                }
            }
            c
        };
        for _ in 0..250 {
            let m1 = random_cycle(&mut rng);
            let m2 = random_cycle(&mut rng);
            let shared = m1.iter_ones().filter(|&e| h.is_triangle(e) && m2.get(e)).count();
            let w1 = loop_operator(&h, &m1).unwrap();
            let w2 = loop_operator(&h, &m2).unwrap();
            assert_eq!(commutes(&w1, &w2).unwrap(), shared % 2 == 0, "{name}");
            let own = m1.iter_ones().filter(|&e| h.is_triangle(e)).count();
            assert_eq!(own % 2, 0, "{name}: a closed hypercycle with an odd triangle count");
            checked += 1;
        }
    }
    assert!(checked >= 1000);
}

#[test]
fn registry_stabilizers_are_measurable() {
    for (name, h, reg) in all_builds() {
        let a = analyze_code(&h).unwrap();
        for c in &reg.cycles {
            let m = h.edge_set(c.edges.iter().copied());
            let w = loop_operator(&h, &m).unwrap();
            assert!(member(&a.gauge, &w) && member(&a.centralizer, &w), "{name} {}", c.tag());
            let links = cycle_links(&h, &m);
            match syndrome_order(&w, &links, SyndromeBudget::default()).unwrap() {
                SyndromeOutcome::Found(order) => {
                    let mut p = PauliVector::identity(h.vertex_count);
                    for j in order {
                        assert!(commutes(&links[j], &p).unwrap(), "{name} {}", c.tag());
                        p.mul_assign(&links[j]);
                    }
                    assert_eq!(p, w, "{name} {}", c.tag());
                }
                other => panic!("{name} {}: {other:?}", c.tag()),
            }
        }
    }
}

#[test]
fn family1_green_and_red_relation() {
    for (h, reg) in [family1_torus(), bolza_family1()] {
        let sum = |color: FaceColor, kind| {
            reg.cycles
                .iter()
                .filter(|c| c.color == color && c.kind == kind)
                .map(|c| loop_operator(&h, &h.edge_set(c.edges.iter().copied())).unwrap())
                .fold(PauliVector::identity(h.vertex_count), |p, w| p.mul(&w))
        };
        use tesscode::hypergraph::CycleKind::*;
        assert_eq!(sum(FaceColor::G, Sigma2), sum(FaceColor::R, Sigma1));
    }
}

#[test]
fn petersen_breaks_the_commutation_rule() {
    let h = common::petersen();
    assert!(matches!(analyze_code(&h), Err(AnalyzeError::CommutationViolation(_, _))));
    assert!(commutation_violation(&h).is_some());
}

#[test]
fn dressed_weight_bounded_by_triangle_count_on_toys() {
    for h in [common::k4(), common::prism(), common::two_triangles(), common::cube()] {
        let a = analyze_code(&h).unwrap();
        assert_eq!(a.n, a.k + a.r + a.s);
        assert_eq!(a.dim_gauge, 2 * a.r + a.s);
        if a.k > 0 {
            let d = brute_min_dressed_weight(&a, a.n).unwrap().expect("some logical exists");
            assert!(d >= 1 && d <= a.n);
        } else {
            assert_eq!(brute_min_dressed_weight(&a, a.n), Err(PauliError::NoLogicalQubits));
        }
    }
}
