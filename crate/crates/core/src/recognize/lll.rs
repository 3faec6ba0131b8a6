use super::RecognizeError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Matrix = Vec<Vec<BigInt>>;

/// Default Lovász parameter `99/100`.
pub fn default_delta() -> BigRational {
    BigRational::new(99.into(), 100.into())
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram-Schmidt data: `mu[i][j]` for `j < i` and squared lengths `b[i]` of the orthogonalized rows.
struct Gso {
    mu: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
}

fn gso(basis: &Matrix) -> Result<Gso, RecognizeError> {
    let n = basis.len();
    let gram: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(dot(&basis[i], &basis[j]))).collect()).collect();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![BigRational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = gram[i][j].clone();
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = gram[i][i].clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        if s.is_zero() {
            return Err(RecognizeError::RankDeficient);
        }
        b[i] = s;
    }
    Ok(Gso { mu, b })
}

fn round_half_away(r: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let n = r.numer() * &two + r.denom();
    n.div_floor(&(r.denom() * two))
}

/// Reduced basis of the lattice spanned by the rows of `basis`.
pub fn lll_reduce(basis: &[Vec<BigInt>], delta: &BigRational) -> Result<Matrix, RecognizeError> {
    Ok(lll_reduce_with_transform(basis, delta)?.0)
}

/// Reduced basis together with the unimodular matrix `H` with `reduced = H * basis`.
pub fn lll_reduce_with_transform(
    basis: &[Vec<BigInt>],
    delta: &BigRational,
) -> Result<(Matrix, Matrix), RecognizeError> {
    let quarter = BigRational::new(1.into(), 4.into());
    if *delta <= quarter || *delta >= BigRational::one() {
        return Err(RecognizeError::InvalidDelta);
    }
    let n = basis.len();
    if n == 0 {
        return Err(RecognizeError::Dimension("empty basis".into()));
    }
    let m = basis[0].len();
    if basis.iter().any(|r| r.len() != m) || n > m {
        return Err(RecognizeError::Dimension(format!("{n} rows of length {m}")));
    }
    let mut b: Matrix = basis.to_vec();
    let mut h: Matrix =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut g = gso(&b)?;
    let half = BigRational::new(1.into(), 2.into());

    let reduce = |k: usize, l: usize, b: &mut Matrix, h: &mut Matrix, g: &mut Gso| {
        if g.mu[k][l].abs() > half {
            let q = round_half_away(&g.mu[k][l]);
            for c in 0..m {
                let t = &q * &b[l][c];
                b[k][c] -= t;
            }
            for c in 0..n {
                let t = &q * &h[l][c];
                h[k][c] -= t;
            }
            let qr = BigRational::from_integer(q);
            g.mu[k][l] -= &qr;
            for i in 0..l {
                let t = &qr * &g.mu[l][i];
                g.mu[k][i] -= t;
            }
        }
    };

    let mut k = 1;
    while k < n {
        reduce(k, k - 1, &mut b, &mut h, &mut g);
        let mu = &g.mu[k][k - 1];
        if g.b[k] < (delta - mu * mu) * &g.b[k - 1] {
            b.swap(k, k - 1);
            h.swap(k, k - 1);
            g = gso(&b)?;
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                reduce(k, l, &mut b, &mut h, &mut g);
            }
            k += 1;
        }
    }
    Ok((b, h))
}

/// Squared Euclidean norm of an integer row.
pub fn norm_sqr(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Lovász and size-reduction conditions.
pub fn is_lll_reduced(b: &[Vec<BigInt>], delta: &BigRational) -> bool {
    let g = match gso(&b.to_vec()) {
        Ok(g) => g,
        Err(_) => return false,
    };
    let half = BigRational::new(1.into(), 2.into());
    for i in 0..b.len() {
        for j in 0..i {
            if g.mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let mu = &g.mu[i][i - 1];
            if g.b[i] < (delta - mu * mu) * &g.b[i - 1] {
                return false;
            }
        }
    }
    true
}
