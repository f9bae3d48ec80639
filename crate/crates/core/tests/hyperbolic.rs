//! Builds on closed hyperbolic surfaces: the Klein quartic {7,3} (genus 3) and the Bolza
//! surface {8,3} (genus 2), inflated to trivalent 3-colorable tessellations.

mod common;

use tesscode::builders::{build_family1, build_family2, build_family3, build_family4, BuildError};
use tesscode::census::{params_family1, params_family2, params_family3, params_family4, SemiRegularCounts};
use tesscode::hypergraph::PlacementError;
use tesscode::pauli::{analyze_code, verify_gloop_identity};
use tesscode::surface_map::{color_by_size, reduced_red_graph, CombinatorialMap};

fn snkr(a: &tesscode::pauli::GroupAnalysis) -> (usize, usize, usize, usize) {
    (a.s, a.n, a.k, a.r)
}

fn inflate(map: &CombinatorialMap, sizes: [usize; 3]) -> (CombinatorialMap, tesscode::surface_map::FaceColoring) {
    let (inf, _, _) = map.inflate_trivalent();
    let col = color_by_size(&inf, sizes).unwrap();
    (inf, col)
}

#[test]
fn source_surfaces() {
    let k = common::klein_quartic();
    assert_eq!((k.vertex_count(), k.edge_count(), k.face_count(), k.genus()), (56, 84, 24, 3));
    let b = common::bolza();
    assert_eq!((b.vertex_count(), b.edge_count(), b.face_count(), b.genus()), (16, 24, 6, 2));
}

#[test]
fn family4_on_klein_matches_the_formula() {
    let (h, _) = build_family4(&common::klein_quartic()).unwrap();
    let a = analyze_code(&h).unwrap();
    let f = params_family4(7, 3).unwrap();
    assert_eq!(snkr(&a), (48, 240, 16, 176));
    assert_eq!((a.s as i64, a.n as i64, a.k as i64, a.r as i64), (f.s, f.n, f.k, f.r));
    assert!(verify_gloop_identity(&h).holds());
}

#[test]
fn family1_on_bolza_matches_the_formula() {
    let (inf, col) = inflate(&common::bolza(), [6, 16, 4]);
    let (h, _) = build_family1(&inf, &col).unwrap();
    let a = analyze_code(&h).unwrap();
    let f = params_family1(3, 8, 2).unwrap();
    assert_eq!(snkr(&a), (43, 192, 11, 138));
    assert_eq!((a.s as i64, a.n as i64, a.k as i64, a.r as i64), (f.s, f.n, f.k, f.r));
}

#[test]
fn family1_with_odd_green_half_size_has_no_even_placement() {
    // every green face of {6,14,4} receives an odd number of forced subdivisions
    let (inf, col) = inflate(&common::klein_quartic(), [6, 14, 4]);
    match build_family1(&inf, &col) {
        Err(BuildError::Placement(PlacementError::Infeasible { cycles })) => assert!(!cycles.is_empty()),
        other => panic!("expected an infeasible placement, got {:?}", other.map(|x| x.0.vertex_count)),
    }
}

/// Families 2 and 3 on these surfaces give exactly 2g more stabilizers than the closed
/// forms, and g fewer gauge and logical qubits; dim G and n agree.
#[test]
fn family3_on_klein_offsets_by_genus() {
    let (inf, col) = inflate(&common::klein_quartic(), [14, 4, 6]);
    let (h, _) = build_family3(&inf, &col).unwrap();
    let a = analyze_code(&h).unwrap();
    let f = params_family3(7, 3).unwrap();
    assert_eq!(snkr(&a), (161, 576, 16, 399));
    let g = 3;
    assert_eq!(a.n as i64, f.n);
    assert_eq!(a.s as i64, f.s + 2 * g);
    assert_eq!((a.r as i64, a.k as i64), (f.r - g, f.k - g));
    assert_eq!(a.dim_gauge as i64, 2 * f.r + f.s);
    assert!(verify_gloop_identity(&h).holds());
}

#[test]
fn family2_on_bolza_offsets_by_genus() {
    let (inf, col) = inflate(&common::bolza(), [16, 4, 6]);
    assert!(reduced_red_graph(&inf, &col).is_tripartite());
    let (h, _) = build_family2(&inf, &col).unwrap();
    let a = analyze_code(&h).unwrap();
    let counts = SemiRegularCounts::from_map(&inf, &col);
    let f = tesscode::census::params_family2_counts(&counts, true).unwrap();
    assert_eq!(f, params_family2(8, 2, true).unwrap());
    assert_eq!(snkr(&a), (43, 144, 4, 97));
    let g = 2;
    assert_eq!(a.n as i64, f.n);
    assert_eq!(a.s as i64, f.s + 2 * g);
    assert_eq!((a.r as i64, a.k as i64), (f.r - g, f.k - g));
    assert_eq!(a.dim_gauge as i64, 2 * f.r + f.s);
}

#[test]
fn closed_form_from_build_source() {
    let (h, _) = build_family4(&common::klein_quartic()).unwrap();
    assert_eq!(tesscode::builders::closed_form(&h).unwrap().unwrap(), params_family4(7, 3).unwrap());
    let (inf, col) = inflate(&common::bolza(), [6, 16, 4]);
    let (h, _) = build_family1(&inf, &col).unwrap();
    assert_eq!(tesscode::builders::closed_form(&h).unwrap().unwrap(), params_family1(3, 8, 2).unwrap());
}
