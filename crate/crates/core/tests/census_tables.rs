mod common;

use tesscode::census::{emit_table, Family};

fn family_of(f: u8) -> Family {
    match f {
        1 => Family::One,
        2 => Family::Two,
        3 => Family::Three,
        _ => Family::Four,
    }
}

#[test]
fn every_reference_row_is_emitted() {
    let rows = common::reference_rows();
    assert_eq!(rows.len(), 138);
    let mut missing = Vec::new();
    for want in &rows {
        let table = emit_table(family_of(want.family), want.g..=want.g);
        let hit = table.iter().filter(|r| r.class == want.class).find_map(|r| {
            let p = match want.branch {
                Some(false) => r.params.get(1)?,
                _ => &r.params[0],
            };
            Some((p.s, p.n, p.k, p.r))
        });
        if hit != Some(want.snkr) {
            missing.push(format!("{want:?} got {hit:?}"));
        }
    }
    assert!(missing.is_empty(), "{missing:#?}");
}

#[test]
fn emitted_rows_satisfy_accounting() {
    for fam in [Family::One, Family::Two, Family::Three, Family::Four] {
        for row in emit_table(fam, 2..=7) {
            for p in &row.params {
                assert_eq!(p.n, p.k + p.r + p.s, "{row:?}");
            }
        }
    }
}

#[test]
fn emitted_extras_are_listed() {
    // rows emitted beyond the reference set
    let reference = common::reference_rows();
    let mut extras = Vec::new();
    for (fam, tag, genus) in [(Family::One, 1u8, 2..=5), (Family::Two, 2, 2..=5), (Family::Three, 3, 2..=5), (Family::Four, 4, 2..=7)] {
        for row in emit_table(fam, genus) {
            if !reference.iter().any(|p| p.family == tag && p.g == row.g && p.class == row.class) {
                extras.push((tag, row.g, row.class_label()));
            }
        }
    }
    assert_eq!(extras, vec![(2, 5, "{108,4,6}".to_string())]);
}
