use homogeneous_moments::hypergeometric::{pfq_detailed, PFQParams};
use homogeneous_moments::vortex_gas::dh_moment_coeff;
use homogeneous_moments::{compositions, i_mn, mixed_moment, BigRational, MultiIndex};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn even_exponents() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec((0u64..6).prop_map(|k| 2 * k), 1..6)
}

proptest! {
    #[test]
    fn mixed_moment_is_permutation_invariant(parts in even_exponents(), rotation in 0usize..6) {
        let base = mixed_moment(&MultiIndex::new(parts.clone()).unwrap()).unwrap();
        let mut rotated = parts.clone();
        rotated.rotate_left(rotation % parts.len());
        prop_assert_eq!(&base, &mixed_moment(&MultiIndex::new(rotated).unwrap()).unwrap());
        let mut reversed = parts.clone();
        reversed.reverse();
        prop_assert_eq!(&base, &mixed_moment(&MultiIndex::new(reversed).unwrap()).unwrap());
    }

    #[test]
    fn padding_with_zero_exponents_is_neutral(parts in even_exponents(), pad in 0usize..4) {
        let base = mixed_moment(&MultiIndex::new(parts.clone()).unwrap()).unwrap();
        let mut padded = parts;
        padded.extend(std::iter::repeat_n(0, pad));
        prop_assert_eq!(base, mixed_moment(&MultiIndex::new(padded).unwrap()).unwrap());
    }

    /// Expanding `⟨v, J⟩^(2m)` with the mixed moments reproduces `‖v‖^(2m)` for
    /// an arbitrary rational direction, i.e. the moments are isotropic.
    #[test]
    fn projected_moment_round_trip(
        v in prop::collection::vec((-9i64..=9, 1i64..=5), 1..=4),
        m in 0u64..=3,
    ) {
        let v: Vec<BigRational> = v.into_iter().map(|(p, d)| q(p, d)).collect();
        let mut total = BigRational::zero();
        for r in compositions(2 * m, v.len()).unwrap() {
            let mut term = BigRational::from_integer(r.multinomial()) * mixed_moment(&r).unwrap();
            for (vj, &rj) in v.iter().zip(r.parts()) {
                term *= num_traits::pow(vj.clone(), rj as usize);
            }
            total += term;
        }
        let norm2: BigRational = v.iter().map(|x| x * x).sum();
        prop_assert_eq!(total, num_traits::pow(norm2, m as usize));
    }

    #[test]
    fn ratio_recurrence(m in 0u64..40, n in 1u64..40) {
        let ratio = i_mn(m + 1, n).unwrap() / i_mn(m, n).unwrap();
        prop_assert_eq!(ratio, q((2 * m + n) as i64, (2 * m + 1) as i64));
    }

    #[test]
    fn dimension_recurrence(m in 0u64..30, n in 1u64..30) {
        // I(m, n + 2) / I(m, n) = (2m + n) / n
        let ratio = i_mn(m, n + 2).unwrap() / i_mn(m, n).unwrap();
        prop_assert_eq!(ratio, q((2 * m + n) as i64, n as i64));
    }

    #[test]
    fn terminating_series_ignore_tolerance(k in 0i64..8, b in 1i64..6, z in -4.0f64..4.0, tol_exp in 0i32..16) {
        let params = PFQParams::new(vec![q(-k, 1), q(1, 2)], vec![q(b, 1)], z).unwrap();
        let loose = pfq_detailed(&params, 10f64.powi(-tol_exp), 100).unwrap();
        let tight = pfq_detailed(&params, f64::MIN_POSITIVE, 100).unwrap();
        prop_assert_eq!(loose, tight);
        prop_assert!(loose.terms <= k as usize + 1);
    }

    #[test]
    fn dh_coefficients_are_positive(n in 1u32..10, m in 0u32..10) {
        let c = dh_moment_coeff(n, m).unwrap();
        prop_assert!(c.coeff > BigRational::zero());
        prop_assert_eq!(c.power, (n + 2 * m) as u64);
    }
}

#[test]
fn unit_weight_moments() {
    assert!(mixed_moment(&MultiIndex::new(vec![0, 0, 0]).unwrap()).unwrap().is_one());
}
