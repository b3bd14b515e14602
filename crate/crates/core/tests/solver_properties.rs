use proptest::prelude::*;
use puiseux_riccati::error::Error;
use puiseux_riccati::polygon::compute_polygon;
use puiseux_riccati::puiseux::{q, PuiseuxPoly, TruncatedSeries};
use puiseux_riccati::riccati::LinearODE;
use puiseux_riccati::solver::{count_check, expand_tree, BranchStatus, Slope, SolutionTree, SolverOptions};

fn check_tree(tree: &SolutionTree) -> Result<(), TestCaseError> {
    let r = &tree.root().operator;
    prop_assert_eq!(count_check(tree).unwrap(), tree.order);
    prop_assert_eq!(tree.full_count(), tree.order);
    for node in &tree.nodes[1..] {
        let parent = &tree.nodes[node.parent.unwrap()];
        prop_assert!(node.mu < parent.mu);
        let Slope::Finite(mu) = node.mu else {
            unreachable!()
        };
        let expected = parent
            .partial_sum
            .checked_add(&PuiseuxPoly::monomial(node.c.clone().unwrap(), mu))
            .unwrap();
        prop_assert_eq!(&node.partial_sum, &expected);
        let residual = r
            .evaluate(&TruncatedSeries::exact(node.partial_sum.clone()))
            .unwrap();
        prop_assert_eq!(residual.body(), node.operator.coeff(0));
        // The residual drops below the edge line; it drops below the parent's
        // residual when the edge reaches ordinate 0.
        if node.certified {
            let p = compute_polygon(&parent.operator).unwrap();
            let e = p.edge_with_mu(&mu).unwrap();
            let after = residual.body().deg_inf();
            prop_assert!(after.is_none_or(|d| d < e.support()));
            if e.lower.1 == 0 {
                let before = parent.operator.coeff(0).deg_inf().unwrap();
                prop_assert!(after.is_none_or(|d| d < before));
            }
        }
    }
    for b in &tree.branches {
        let v = r
            .evaluate(&TruncatedSeries::exact(b.series.body().clone()))
            .unwrap();
        match b.status {
            BranchStatus::Exact => {
                for c in b.conjugates_in_tower(&tree.base_tower).unwrap() {
                    prop_assert!(r.evaluate(&c).unwrap().body().is_zero());
                }
            }
            BranchStatus::Truncated => {
                prop_assert_eq!(v.body().deg_inf(), b.residual_degree);
            }
        }
    }
    Ok(())
}

fn arb_ode() -> impl Strategy<Value = LinearODE> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(prop::collection::vec(-3i64..=3, 0..4), n),
                prop::collection::vec(-3i64..=3, 1..4)
                    .prop_filter("nonzero top", |v| v.iter().any(|&c| c != 0)),
            )
        })
        .prop_map(|(mut lower, top)| {
            lower.push(top);
            let refs: Vec<&[i64]> = lower.iter().map(Vec::as_slice).collect();
            LinearODE::from_int_coeffs(&refs).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_trees_are_consistent(s in arb_ode()) {
        let opts = SolverOptions { floor: q(-3, 1), max_terms: 4, ..Default::default() };
        match expand_tree(&s, &opts) {
            Ok(tree) => check_tree(&tree)?,
            Err(Error::DepthCap { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn corpus_trees_are_consistent() {
    let corpus: &[&[&[i64]]] = &[
        &[&[0, -1], &[], &[1]],
        &[&[-1], &[], &[1]],
        &[&[1], &[], &[1]],
        &[&[], &[-1], &[1]],
        &[&[-1], &[], &[], &[1]],
        &[&[0, -1], &[], &[], &[1]],
        &[&[-1], &[1], &[0, 1]],
        &[&[0, 0, 1], &[1], &[1]],
        &[&[1], &[-2], &[1]],
        &[&[0, 1], &[0, -2], &[1]],
    ];
    for c in corpus {
        let s = LinearODE::from_int_coeffs(c).unwrap();
        let tree = expand_tree(&s, &SolverOptions::default()).unwrap();
        check_tree(&tree).unwrap();
    }
}

#[test]
fn runs_are_deterministic() {
    let s = LinearODE::from_int_coeffs(&[&[0, -1], &[], &[], &[1]]).unwrap();
    let opts = SolverOptions {
        floor: q(-4, 1),
        ..Default::default()
    };
    let a = expand_tree(&s, &opts).unwrap();
    let b = expand_tree(&s, &opts).unwrap();
    let c = expand_tree(
        &s,
        &SolverOptions {
            parallel: true,
            ..opts
        },
    )
    .unwrap();
    assert_eq!(a.to_dot(), b.to_dot());
    assert_eq!(a.to_dot(), c.to_dot());
}

#[test]
fn max_terms_bounds_depth() {
    let s = LinearODE::from_int_coeffs(&[&[0, -1], &[], &[1]]).unwrap();
    let opts = SolverOptions {
        floor: q(-100, 1),
        max_terms: 3,
        ..Default::default()
    };
    let tree = expand_tree(&s, &opts).unwrap();
    for b in &tree.branches {
        assert_eq!(b.series.body().len(), 3);
        assert_eq!(b.status, BranchStatus::Truncated);
    }
    assert!(expand_tree(&s, &SolverOptions { max_terms: 0, ..opts }).is_err());
}
