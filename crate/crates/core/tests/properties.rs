use proptest::prelude::*;
use qcss::correlation::{measure_theta_max, Engine};
use qcss::field::FieldContext;
use qcss::generators::{prop1_family, thm41_family, thm42_family, Permutation};
use qcss::interleave::interleave_family;
use qcss::qcss_lower_bound;

fn shuffled(len: usize, keys: &[u64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    idx.sort_by_key(|&i| keys[i]);
    idx
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn full_family_maximum_ignores_rho(len in prop::sample::select(vec![9usize, 15, 21]), keys in prop::collection::vec(any::<u64>(), 21)) {
        let rho = Permutation::from_table(shuffled(len, &keys)).unwrap();
        let fam = thm41_family(len, &rho).unwrap();
        let report = measure_theta_max(&fam, Engine::Auto).unwrap();
        prop_assert!((report.measured_max - len as f64).abs() < 1e-6);
        prop_assert!(report.support_within(&[0.0, len as f64], 1e-6));
    }

    #[test]
    fn deleted_family_maximum_ignores_rho(len in prop::sample::select(vec![9usize, 15]), keys in prop::collection::vec(any::<u64>(), 15)) {
        let mut table = shuffled(len, &keys);
        // row 0 must map to 0 for the row-0 deletion
        let zero = table.iter().position(|&v| v == 0).unwrap();
        table.swap(0, zero);
        let fam = thm42_family(len, &Permutation::from_table(table).unwrap()).unwrap();
        let report = measure_theta_max(&fam, Engine::Auto).unwrap();
        prop_assert!((report.measured_max - len as f64).abs() < 1e-6);
    }
}

#[test]
fn character_family_support_across_fields() {
    for (p, n) in [(2, 3), (3, 2), (2, 4), (5, 2), (3, 3)] {
        let ctx = FieldContext::new(p, n).unwrap();
        let fam = prop1_family(&ctx).unwrap();
        let q = ctx.q() as f64;
        let report = measure_theta_max(&fam, Engine::Naive).unwrap();
        assert!((report.measured_max - q.sqrt()).abs() < 1e-6, "q={q}");
        assert!(report.support_within(&[0.0, 1.0, q.sqrt()], 1e-6), "q={q} {:?}", report.support());
    }
}

#[test]
fn measured_maxima_respect_lower_bound() {
    let mut cases = Vec::new();
    for (p, n, k) in [(2, 4, 3), (2, 4, 5), (3, 2, 2), (3, 2, 4), (5, 2, 3), (2, 6, 3), (2, 6, 7)] {
        let ctx = FieldContext::new(p, n).unwrap();
        cases.push(interleave_family(&prop1_family(&ctx).unwrap(), k).unwrap());
    }
    for len in [9, 15, 25] {
        cases.push(thm41_family(len, &Permutation::identity(len)).unwrap());
        cases.push(thm42_family(len, &Permutation::negation(len)).unwrap());
    }
    for fam in cases {
        let (m, k, n) = fam.shape();
        let report = measure_theta_max(&fam, Engine::Auto).unwrap();
        let bound = qcss_lower_bound(m, k, n).unwrap();
        assert!(report.measured_max >= bound - 1e-9, "({m},{k},{n}): {} < {bound}", report.measured_max);
        assert!(report.measured_max <= fam.declared_vartheta_max.unwrap() + 1e-6);
    }
}
