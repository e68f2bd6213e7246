//! Cross-module identities over small fields.

use ffvar_core::algebra::{FieldParams, Poly};
use ffvar_core::apstats::{direct_coprime_sum, mean_variance, progression_sums, spectral_variance, variance_report};
use ffvar_core::curve::{CurveFamily, TraceMode, TraceTable};
use ffvar_core::dirichlet::ResidueGroup;
use ffvar_core::lfun::{analyze_all, trace_sequence, Classification, UnitBuckets};
use ffvar_core::Error;

fn legendre(q: u64, modulus: &[i64], max: usize) -> (CurveFamily, TraceTable, ResidueGroup, UnitBuckets) {
    let f = FieldParams::with_order(q).unwrap();
    let curve = CurveFamily::legendre(&f);
    let table = TraceTable::for_curve(&curve, max, TraceMode::Auto).unwrap();
    let group = ResidueGroup::new(&f, &Poly::from_ints(&f, modulus)).unwrap();
    let buckets = UnitBuckets::new(&table, &group, max).unwrap();
    (curve, table, group, buckets)
}

#[test]
fn naive_and_dft_tables_agree() {
    let f = FieldParams::with_order(5).unwrap();
    let curve = CurveFamily::legendre(&f);
    let a = TraceTable::for_curve(&curve, 3, TraceMode::Naive).unwrap();
    let b = TraceTable::for_curve(&curve, 3, TraceMode::Dft).unwrap();
    for n in 1..=3 {
        let (x, y) = (a.degree(n).unwrap(), b.degree(n).unwrap());
        assert_eq!(x.entries, y.entries);
    }
}

#[test]
fn trivial_character_is_the_coprime_sum() {
    let (curve, _, group, buckets) = legendre(5, &[0, 2, 0, 1], 4);
    let chi0 = group.trivial_character();
    let seq = trace_sequence(&buckets, &group, &chi0, 4).unwrap();
    for n in 1..=4 {
        let direct = direct_coprime_sum(&curve, group.modulus(), n).unwrap();
        assert_eq!(seq.b[n - 1].re, direct as f64);
        assert!(seq.b[n - 1].im.abs() < 1e-9);
    }
}

#[test]
fn variance_both_ways() {
    let (_, table, group, buckets) = legendre(7, &[0, 3, 0, 1], 5);
    for n in 1..=5 {
        let sums = progression_sums(&table, group.modulus(), n).unwrap();
        let mv = mean_variance(&sums);
        let bs: Vec<_> = group
            .characters()
            .filter(|c| !c.is_trivial())
            .map(|c| trace_sequence(&buckets, &group, &c, n).unwrap().b[n - 1])
            .collect();
        let spectral = spectral_variance(&bs, group.order());
        assert!((spectral - mv.variance).abs() <= 1e-8 * mv.variance.max(1.0), "n = {n}: {spectral} vs {}", mv.variance);
        let report = variance_report(&table, &group, &buckets, n, 5).unwrap();
        assert_eq!(report.trivial_trace, mv.total);
    }
}

#[test]
fn every_twist_has_degree_five_and_no_heavy_roots() {
    let (curve, _, group, buckets) = legendre(5, &[0, 2, 0, 1], 5);
    assert_eq!(curve.reduction_profile(group.modulus()).unwrap().r_c, 5);
    for (seq, l) in analyze_all(&buckets, &group, 5).unwrap() {
        assert!(l.has_full_degree(5), "{:?}", seq.character);
        assert_ne!(l.classification, Classification::Heavy);
    }
}

#[test]
fn errors_are_typed() {
    let f = FieldParams::with_order(3).unwrap();
    assert!(matches!(ResidueGroup::new(&f, &Poly::from_ints(&f, &[0, 0, 1])), Err(Error::InvalidInput(_))));
    let curve = CurveFamily::legendre(&FieldParams::with_order(13).unwrap());
    assert!(matches!(TraceTable::for_curve(&curve, 12, TraceMode::Auto), Err(Error::Resource(_))));
}
