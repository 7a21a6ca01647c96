use std::collections::BTreeSet;

use square_gluings::canonical::canonical_code;
use square_gluings::enumerate::enumerate_gluings;
use square_gluings::octagon::{self, count_dc_octagons, enumerate_dc_octagons, lower_bound_family, octagon_to_gluing};

#[test]
fn counts_are_monotone_and_match_enumeration() {
    let mut last = 0;
    for n in 2..=80 {
        let c = count_dc_octagons(n);
        assert!(c >= last, "n = {n}");
        assert_eq!(c, enumerate_dc_octagons(n).count() as u64, "n = {n}");
        last = c;
    }
    let table = octagon::count_table(20);
    assert!(table.iter().all(|&(n, c)| c == count_dc_octagons(n)));
}

#[test]
fn family_lies_in_enumeration() {
    for n in [16u64, 36, 64, 100] {
        let all: BTreeSet<_> = enumerate_dc_octagons(n).collect();
        for p in lower_bound_family(n) {
            assert!(all.contains(&p), "{p:?} missing at n = {n}");
        }
    }
}

#[test]
fn small_octagons_are_enumerated_gluings() {
    for m in 1..=6 {
        let codes: BTreeSet<_> = enumerate_gluings(m).unwrap().iter().map(canonical_code).collect();
        for p in enumerate_dc_octagons(6).filter(|p| p.squares() == m as u64) {
            let g = octagon_to_gluing(&p).unwrap();
            assert!(codes.contains(&canonical_code(&g)), "{p:?}");
        }
    }
}

#[test]
fn json_round_trip() {
    for p in enumerate_dc_octagons(12) {
        assert_eq!(octagon::OctagonParams::from_json_line(&p.to_json_line()).unwrap(), p);
    }
}
