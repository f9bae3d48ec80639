//! Shared inputs for the benchmarks.

use tesscode::builders::{build_bombin, build_family1, build_family2};
use tesscode::hypergraph::{FaceRegistry, Hypergraph};
use tesscode::surface_map::torus_tessellation;

/// The 2x2 torus builds: family 1 on {6,12,4}, family 2 on {12,4,6}, corners on {6,6,6}.
pub fn torus_builds() -> Vec<(&'static str, Hypergraph, FaceRegistry)> {
    let mut out = Vec::new();
    for (name, class) in [("family1", [6, 12, 4]), ("family2", [12, 4, 6]), ("bombin", [6, 6, 6])] {
        let (map, col) = torus_tessellation(class, 2, 2).expect("torus class");
        let (h, reg) = match name {
            "family1" => build_family1(&map, &col),
            "family2" => build_family2(&map, &col),
            _ => build_bombin(&map, &col),
        }
        .expect("torus builds");
        out.push((name, h, reg));
    }
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn inputs_build() {
        let b = super::torus_builds();
        assert_eq!(b.iter().map(|x| x.1.vertex_count).collect::<Vec<_>>(), vec![96, 72, 72]);
    }
}
