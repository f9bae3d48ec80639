use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tesscode::census::{emit_table, Family};
use tesscode::homology::{min_triangles_nontrivial, HomologyDecomposition, HomologyMode};
use tesscode::pauli::{analyze_code, cycle_links, loop_operator, syndrome_order, SyndromeBudget};
use tesscode::surface_map::torus_tessellation;
use tesscode_bench::torus_builds;

fn census(c: &mut Criterion) {
    c.bench_function("census/family1 g2..5", |b| b.iter(|| emit_table(Family::One, black_box(2..=5))));
    c.bench_function("census/family4 g2..7", |b| b.iter(|| emit_table(Family::Four, black_box(2..=7))));
}

fn build(c: &mut Criterion) {
    let (map, col) = torus_tessellation([6, 12, 4], 2, 2).unwrap();
    c.bench_function("build/family1 2x2", |b| b.iter(|| tesscode::builders::build_family1(black_box(&map), &col).unwrap()));
}

fn algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("analyze");
    g.sample_size(10);
    for (name, h, _) in torus_builds() {
        g.bench_function(name, |b| b.iter(|| analyze_code(black_box(&h)).unwrap()));
    }
    g.finish();
}

fn homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("min_triangles");
    g.sample_size(10);
    for (name, h, _) in torus_builds() {
        let d = HomologyDecomposition::new(&h, HomologyMode::Surface).unwrap();
        g.bench_function(name, |b| b.iter(|| min_triangles_nontrivial(black_box(&h), &d, 5_000_000).unwrap()));
    }
    g.finish();
}

fn syndrome(c: &mut Criterion) {
    let mut g = c.benchmark_group("syndrome_order");
    for (name, h, reg) in torus_builds() {
        let jobs: Vec<_> = reg
            .cycles
            .iter()
            .map(|cy| {
                let m = h.edge_set(cy.edges.iter().copied());
                (loop_operator(&h, &m).unwrap(), cycle_links(&h, &m))
            })
            .collect();
        g.bench_function(name, |b| {
            b.iter(|| {
                for (w, links) in &jobs {
                    black_box(syndrome_order(w, links, SyndromeBudget::default()).unwrap());
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, census, build, algebra, homology, syndrome);
criterion_main!(benches);
