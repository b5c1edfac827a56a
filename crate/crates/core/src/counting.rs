use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::signature::Signature;

/// The structure's Catalan numbers `S_0..=S_N`, kept exact.
///
/// `S_n` counts the distinct constant-free terms of order `n` over the
/// signature; equivalently it is the degree-`n` coefficient of the generating
/// function fixed by `(phi(t) - 1) / t = sum_i phi(t)^arity_i`, `phi(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSequence {
    sig: Signature,
    values: Vec<BigUint>,
}

impl CountSequence {
    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.values[n]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Counts as decimal strings, for JSON output (they outgrow u64 fast).
    pub fn to_digit_strings(&self) -> Vec<String> {
        self.values.iter().map(|v| v.to_string()).collect()
    }
}

/// Exact binomial coefficient; 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // acc stays integral: after the i-th step it equals C(n, i+1).
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of solutions of `x_1 + ... + x_arity = n` in nonnegative integers,
/// i.e. `C(arity + n - 1, n)`.
pub fn composition_count(arity: u64, n: u64) -> BigUint {
    assert!(arity >= 1, "composition_count needs arity >= 1");
    binomial(arity + n - 1, n)
}

/// Computes `S_0..=S_max_order` by the convolution recursion
/// `S_{n+1} = sum_i [t^n] phi(t)^arity_i` with `S_0 = 1`.
pub fn structure_catalan(sig: &Signature, max_order: usize) -> CountSequence {
    let max_arity = sig.max_arity();
    let mut values: Vec<BigUint> = vec![BigUint::one()];
    // powers[j][d] = coefficient d of phi^j, filled degree by degree so that
    // the next S value only ever reads finished entries.
    let mut powers: Vec<Vec<BigUint>> = vec![Vec::new(); max_arity + 1];
    for m in 0..=max_order {
        for j in 1..=max_arity {
            let coeff = if j == 1 {
                values[m].clone()
            } else {
                let mut sum = BigUint::zero();
                for e in 0..=m {
                    sum += &values[e] * &powers[j - 1][m - e];
                }
                sum
            };
            powers[j].push(coeff);
        }
        if m == max_order {
            break;
        }
        let next = sig
            .ops()
            .iter()
            .map(|op| powers[op.arity][m].clone())
            .sum();
        values.push(next);
    }
    CountSequence {
        sig: sig.clone(),
        values,
    }
}

/// Classical Catalan number `C(2n, n) / (n + 1)`.
pub fn classical_catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / (n + 1)
}

/// Fuss-Catalan number `C(arity * n, n) / ((arity - 1) * n + 1)` for a single
/// operation of the given arity.
pub fn fuss_catalan(arity: u64, n: u64) -> BigUint {
    assert!(arity >= 2, "fuss_catalan needs arity >= 2");
    binomial(arity * n, n) / ((arity - 1) * n + 1)
}

/// Closed form `lambda^n * S_n` for a signature of `lambda` binary operations.
pub fn lambda_binary_closed(lambda: u64, n: u64) -> BigUint {
    assert!(lambda >= 1, "lambda_binary_closed needs lambda >= 1");
    let exponent = u32::try_from(n).expect("order fits u32");
    BigUint::from(lambda).pow(exponent) * classical_catalan(n)
}

/// Truncated product of two series through `max_degree`.
fn series_mul(a: &[BigUint], b: &[BigUint], max_degree: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); max_degree + 1];
    for (i, ai) in a.iter().enumerate().take(max_degree + 1) {
        for (j, bj) in b.iter().enumerate().take(max_degree + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients 0..=max_degree of `phi - 1 - t * sum_i phi^arity_i` where
/// `phi` is the truncated counting series. All zero when the recursion and
/// the functional equation agree.
pub fn functional_equation_residual(sig: &Signature, max_degree: usize) -> Vec<BigInt> {
    let phi: Vec<BigUint> = structure_catalan(sig, max_degree).values().to_vec();
    let mut rhs = vec![BigUint::zero(); max_degree + 1];
    for op in sig.ops() {
        let mut power = vec![BigUint::one()];
        for _ in 0..op.arity {
            power = series_mul(&power, &phi, max_degree);
        }
        for (r, p) in rhs.iter_mut().zip(&power) {
            *r += p;
        }
    }
    let mut residual = Vec::with_capacity(max_degree + 1);
    residual.push(BigInt::from(phi[0].clone()) - BigInt::one());
    for d in 1..=max_degree {
        residual.push(BigInt::from(phi[d].clone()) - BigInt::from(rhs[d - 1].clone()));
    }
    residual
}

/// Natural log of a positive big integer, safe far beyond f64 range.
fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        x.to_f64().expect("small value fits f64").ln()
    } else {
        let shift = bits - 53;
        let top = (x >> shift).to_f64().expect("53-bit mantissa fits f64");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `S_n` divided by its leading asymptotic `4^n / (sqrt(pi) n^(3/2))`,
/// computed in log space from the exact value. Approaches 1 from below.
pub fn catalan_asymptotic_ratio(n: u64) -> f64 {
    assert!(n >= 1, "asymptotic ratio needs n >= 1");
    let ln_exact = ln_biguint(&classical_catalan(n));
    let nf = n as f64;
    let ln_predicted = nf * 4f64.ln() - 0.5 * PI.ln() - 1.5 * nf.ln();
    (ln_exact - ln_predicted).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 2), big(15));
        assert_eq!(binomial(2, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), big(1));
        // n = 3 classical Catalan via its closed form
        assert_eq!(binomial(6, 3) / 4u32, big(5));
        // stars and bars with alpha = 2, n = 3
        assert_eq!(binomial(2 + 3 - 1, 3), big(4));
    }

    #[test]
    fn composition_count_matches_enumeration() {
        // brute-force count of solutions of x1 + ... + xa = n
        fn brute(arity: usize, n: usize) -> u64 {
            crate::term::compositions(n, arity).len() as u64
        }
        assert_eq!(composition_count(2, 3), big(brute(2, 3)));
        assert_eq!(composition_count(3, 1), big(3));
        for arity in 1..=4u64 {
            assert_eq!(composition_count(arity, 0), big(1));
            for n in 0..=6u64 {
                assert_eq!(
                    composition_count(arity, n),
                    big(brute(arity as usize, n as usize))
                );
            }
        }
    }

    #[test]
    fn two_binary_ops_sequence() {
        let sig = Signature::new([('V', 2), ('W', 2)]).unwrap();
        let seq = structure_catalan(&sig, 5);
        let got: Vec<u64> = seq.values().iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(got, [1, 2, 8, 40, 224, 1344]);
    }

    #[test]
    fn one_binary_op_is_classical() {
        let sig = Signature::new([('V', 2)]).unwrap();
        let seq = structure_catalan(&sig, 5);
        let got: Vec<u64> = seq.values().iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(got, [1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn mixed_arity_sequence() {
        let sig = Signature::new([('V', 2), ('U', 3)]).unwrap();
        let seq = structure_catalan(&sig, 2);
        let got: Vec<u64> = seq.values().iter().map(|v| v.to_u64().unwrap()).collect();
        // order 2: 4 terms with binary root, 6 with ternary root
        assert_eq!(got, [1, 2, 10]);
    }

    #[test]
    fn classical_values() {
        assert_eq!(classical_catalan(0), big(1));
        assert_eq!(classical_catalan(5), big(42));
        assert_eq!(classical_catalan(6), big(132));
        assert_eq!(big(2).pow(6) * classical_catalan(6), big(8448));
    }

    #[test]
    fn catalan_two_term_recursion() {
        // S_n = 2(2n-1)/(n+1) S_{n-1}, exactly, through n = 30
        for n in 1..=30u64 {
            assert_eq!(
                classical_catalan(n) * (n + 1),
                classical_catalan(n - 1) * (2 * (2 * n - 1))
            );
        }
    }

    #[test]
    fn fuss_is_classical_at_two() {
        for n in 0..=10 {
            assert_eq!(fuss_catalan(2, n), classical_catalan(n));
        }
    }

    #[test]
    fn fuss_small_values() {
        assert_eq!(fuss_catalan(3, 2), big(3));
        assert_eq!(fuss_catalan(3, 3), big(12));
    }

    #[test]
    fn lambda_closed_form_values() {
        assert_eq!(lambda_binary_closed(2, 3), big(40));
        for n in 0..=10 {
            assert_eq!(lambda_binary_closed(1, n), classical_catalan(n));
        }
        assert_eq!(lambda_binary_closed(3, 2), big(18));
    }

    #[test]
    fn residual_vanishes() {
        let vw = Signature::new([('V', 2), ('W', 2)]).unwrap();
        assert!(functional_equation_residual(&vw, 5)
            .iter()
            .all(BigInt::is_zero));

        let v = Signature::new([('V', 2)]).unwrap();
        assert!(functional_equation_residual(&v, 3)
            .iter()
            .all(BigInt::is_zero));

        assert_eq!(
            functional_equation_residual(&vw, 0),
            vec![BigInt::zero()]
        );
    }

    #[test]
    fn asymptotic_ratio_values() {
        let r1 = catalan_asymptotic_ratio(1);
        // S_1 = 1 against 4 / sqrt(pi)
        assert!((r1 - PI.sqrt() / 4.0).abs() < 1e-12);
        assert!((r1 - 0.4431).abs() < 5e-5);

        let r100 = catalan_asymptotic_ratio(100);
        let r1000 = catalan_asymptotic_ratio(1000);
        // the 1 - 9/(8n) expansion puts ratio(1000) near 0.99888
        assert!((r1000 - 0.99888).abs() < 5e-4);
        assert!(r100 < r1000 && r1000 < 1.0);
    }
}
