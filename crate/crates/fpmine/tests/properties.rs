//! Cross-module property tests: anti-monotone support, loader round trips,
//! miner equivalence and downward closure, rule metric identities, kernel
//! symmetry, and Gram-matrix positive semidefiniteness checked against an
//! independent Jacobi eigensolver.

use fpmine::miners::{apriori_mine, brute_force_mine, fpgrowth_mine, MiningConfig};
use fpmine::rules::{generate_rules, rule_metrics, RuleConfig};
use fpmine::svm::{kernel_eval, FeatureVector, KernelSpec};
use fpmine::txdb::{load_fimi, to_fimi, Itemset, TransactionDb};
use proptest::prelude::*;

fn arb_db() -> impl Strategy<Value = TransactionDb> {
    (2u32..9).prop_flat_map(|n_items| {
        prop::collection::vec(
            prop::collection::vec(0..n_items, 1..=(n_items as usize)),
            1..40,
        )
        .prop_map(|rows| TransactionDb::from_item_vecs(&rows).unwrap())
    })
}

fn arb_vec(dim: usize) -> impl Strategy<Value = FeatureVector> {
    prop::collection::vec(-10.0f64..10.0, dim).prop_map(|v| FeatureVector::new(v).unwrap())
}

proptest! {
    #[test]
    fn support_is_anti_monotone(db in arb_db(), raw in prop::collection::vec(0u32..9, 0..5)) {
        let superset = Itemset::new(raw.iter().copied().filter(|&i| i < db.n_items()));
        // Every subset of the (valid) superset must have at least its support.
        let sup_support = db.support(&superset).unwrap();
        let items: Vec<u32> = superset.iter().map(|i| i.0).collect();
        for mask in 0..(1u32 << items.len()) {
            let subset = Itemset::new(
                (0..items.len()).filter(|i| mask & (1 << i) != 0).map(|i| items[i]),
            );
            prop_assert!(db.support(&subset).unwrap() >= sup_support);
        }
    }

    #[test]
    fn singleton_support_matches_independent_scan(db in arb_db()) {
        for item in 0..db.n_items() {
            let by_scan = db
                .transactions()
                .iter()
                .filter(|t| t.items().iter().any(|it| it.0 == item))
                .count() as f64
                / db.len() as f64;
            let by_support = db.support(&Itemset::new([item])).unwrap();
            prop_assert!((by_scan - by_support).abs() < 1e-15);
        }
    }

    #[test]
    fn fimi_round_trip(db in arb_db()) {
        let text = to_fimi(&db);
        let back = load_fimi(&text).unwrap();
        prop_assert_eq!(back.transactions(), db.transactions());
        prop_assert_eq!(to_fimi(&back), text);
    }

    #[test]
    fn miners_agree_and_close_downward(db in arb_db(), minsup in 0.05f64..0.9) {
        let cfg = MiningConfig::new(minsup);
        let oracle = brute_force_mine(&db, &cfg).unwrap();
        let apriori = apriori_mine(&db, &cfg).unwrap();
        let fpgrowth = fpgrowth_mine(&db, &cfg).unwrap();
        prop_assert_eq!(&apriori, &oracle);
        prop_assert_eq!(&fpgrowth, &oracle);

        // Downward closure with support monotonicity.
        for (itemset, count) in oracle.iter() {
            let items: Vec<u32> = itemset.iter().map(|i| i.0).collect();
            for mask in 1..(1u32 << items.len()) - 1 {
                let sub = Itemset::new(
                    (0..items.len()).filter(|i| mask & (1 << i) != 0).map(|i| items[i]),
                );
                if sub.is_empty() { continue; }
                let sub_count = oracle.count_of(&sub);
                prop_assert!(sub_count.is_some(), "subset {} missing", sub);
                prop_assert!(sub_count.unwrap() >= count);
            }
        }
    }

    #[test]
    fn rule_metric_identities(db in arb_db(), minsup in 0.1f64..0.5) {
        let fi = apriori_mine(&db, &MiningConfig::new(minsup)).unwrap();
        let rules = generate_rules(&fi, &db, &RuleConfig { minconf: 0.0, top_k: 20 }).unwrap();
        for r in &rules {
            let sx = db.support(&r.antecedent).unwrap();
            let sy = db.support(&r.consequent).unwrap();
            prop_assert!(r.support <= sx.min(sy) + 1e-12);
            prop_assert!(r.confidence >= r.support - 1e-12);
            prop_assert!((r.lift - r.confidence / sy).abs() < 1e-9);
            prop_assert!((r.confidence * sx - r.support).abs() < 1e-12);
            prop_assert!(r.lift > 0.0);

            let (s, c, l) = rule_metrics(&db, &r.antecedent, &r.consequent).unwrap();
            prop_assert!((s - r.support).abs() < 1e-12);
            prop_assert!((c - r.confidence).abs() < 1e-12);
            prop_assert!((l - r.lift).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_symmetry(x in arb_vec(4), y in arb_vec(4), gamma in 0.01f64..5.0) {
        let lin = KernelSpec::Linear;
        prop_assert_eq!(
            kernel_eval(&lin, &x, &y).unwrap(),
            kernel_eval(&lin, &y, &x).unwrap()
        );
        let poly = KernelSpec::Polynomial { degree: 3, scale: 0.5, coef0: 1.0 };
        prop_assert_eq!(
            kernel_eval(&poly, &x, &y).unwrap(),
            kernel_eval(&poly, &y, &x).unwrap()
        );
        let rbf = KernelSpec::Rbf { gamma };
        let d = (kernel_eval(&rbf, &x, &y).unwrap() - kernel_eval(&rbf, &y, &x).unwrap()).abs();
        prop_assert!(d < 1e-15);
    }

    #[test]
    fn gram_matrices_are_positive_semidefinite(
        vectors in prop::collection::vec(arb_vec(3), 2..=10),
        gamma in 0.05f64..3.0,
    ) {
        for spec in [KernelSpec::Linear, KernelSpec::Rbf { gamma }] {
            let n = vectors.len();
            let mut gram = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    gram[i][j] = kernel_eval(&spec, &vectors[i], &vectors[j]).unwrap();
                }
            }
            let eigenvalues = jacobi_eigenvalues(gram);
            let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            prop_assert!(min >= -1e-8, "kernel {:?}: min eigenvalue {}", spec, min);
        }
    }
}

/// Cyclic Jacobi eigenvalue iteration for a symmetric matrix. Kept here,
/// independent of the crate under test, as the oracle for the PSD check.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[test]
fn jacobi_oracle_sanity() {
    // Eigenvalues of [[2, 1], [1, 2]] are 1 and 3.
    let mut eig = jacobi_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
    eig.sort_by(f64::total_cmp);
    assert!((eig[0] - 1.0).abs() < 1e-10);
    assert!((eig[1] - 3.0).abs() < 1e-10);

    // An indefinite matrix must report a negative eigenvalue.
    let eig = jacobi_eigenvalues(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    assert!(eig.iter().copied().fold(f64::INFINITY, f64::min) < -0.9);
}
