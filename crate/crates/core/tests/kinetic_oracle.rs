use fockmel::integrals::PCache;
use fockmel::matrix::{kinetic_entry, kinetic_terms, BasisTerm, TABLE_00, TABLE_10};
use fockmel::selftest::{covered_table_rows, kinetic_pairs, kinetic_suite, KET_CLASSES};

#[test]
fn kinetic_entries_match_quadrature_and_are_symmetric() {
    let report = kinetic_suite(3, 99, 256, 1e-8);
    assert!(report.passed(), "{}\n{:#?}", report.summary(), report.failures());
}

#[test]
fn default_pairs_exercise_every_table_row() {
    let pairs = kinetic_pairs(8, 3);
    let covered = covered_table_rows(&pairs);
    assert_eq!(covered.len(), TABLE_00.len() + TABLE_10.len() + 10, "{covered:?}");
    for class in KET_CLASSES {
        assert!(pairs.iter().any(|(_, k)| (k.i, k.j) == class));
    }
}

#[test]
fn zero_coefficient_rows_never_reach_the_integral_cache() {
    // For n = l = m = 0 most rows vanish; the surviving keys alone are evaluated.
    let ket = BasisTerm::new(0, 0, 0, 0, 0).unwrap();
    let cache = PCache::new(256);
    let _ = kinetic_entry(&ket, &ket, &cache).unwrap();
    let rows = kinetic_terms(&ket).unwrap().len();
    assert_eq!(rows, 3);
    assert_eq!(cache.stats().evaluations as usize, rows);
}
