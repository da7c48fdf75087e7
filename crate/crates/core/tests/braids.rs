use proptest::prelude::*;

use twalex::alexander::{assemble_complex, homology_orders};
use twalex::coeff::CycloField;
use twalex::input::{emit_presentation, parse_presentation};
use twalex::presentation::{closure_presentation, BraidWord};
use twalex::repn::{Epsilon, Representation};

/// Invariant factors of an integer matrix (nonzero ones only), by gcd elimination.
#[allow(clippy::needless_range_loop)]
fn integer_invariant_factors(mut a: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut factors = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // smallest nonzero entry of the trailing block as pivot
        let pivot = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let mut clean = true;
        for i in k + 1..rows {
            let q = a[i][k] / a[k][k];
            for j in k..cols {
                a[i][j] -= q * a[k][j];
            }
            clean &= a[i][k] == 0;
        }
        for j in k + 1..cols {
            let q = a[k][j] / a[k][k];
            for i in k..rows {
                a[i][j] -= q * a[i][k];
            }
            clean &= a[k][j] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        if let Some(i) = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| a[i][j] % a[k][k] != 0)) {
            for j in k..cols {
                a[k][j] += a[i][j];
            }
            continue;
        }
        factors.push(a[k][k].abs());
        k += 1;
    }
    factors
}

fn braid_strategy() -> impl Strategy<Value = BraidWord> {
    (2usize..=5).prop_flat_map(|d| {
        let gen = (1..d as i64).prop_flat_map(|i| prop_oneof![Just(i), Just(-i)]);
        prop::collection::vec(gen, 0..10).prop_map(move |letters| BraidWord::new(d, letters).unwrap())
    })
}

#[test]
fn integer_smith_helper() {
    assert_eq!(integer_invariant_factors(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
    assert_eq!(integer_invariant_factors(vec![vec![1, -1, 0], vec![0, 1, -1]]), vec![1, 1]);
    assert_eq!(integer_invariant_factors(vec![vec![0, 0]]), Vec::<i64>::new());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_abelianizes_to_one_copy_of_z_per_component(b in braid_strategy()) {
        let p = closure_presentation(&b);
        let matrix: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_sums(p.num_generators())).collect();
        let factors = integer_invariant_factors(matrix);
        prop_assert_eq!(factors.len(), p.num_generators() - p.components().len());
        prop_assert!(factors.iter().all(|&f| f == 1));
        prop_assert_eq!(p.components().len(), b.cycles().len());
    }

    #[test]
    fn emitted_closure_parses_back(b in braid_strategy()) {
        let p = closure_presentation(&b);
        prop_assert_eq!(parse_presentation(&emit_presentation(&p, 1)).unwrap(), p);
    }

    #[test]
    fn classical_polynomial_of_a_link_is_symmetric(b in braid_strategy()) {
        let p = closure_presentation(&b);
        let m = p.num_generators();
        let c = assemble_complex(&p, &Epsilon::all_ones(m), &Representation::trivial(&CycloField::rationals(), m, 1)).unwrap();
        let d1 = homology_orders(&c).delta1;
        prop_assert!(d1.assoc_eq(&d1.conj()), "Δ¹ = {}", d1);
    }
}
