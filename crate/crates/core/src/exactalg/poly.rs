use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Scalar;

/// Dense univariate polynomial over the rationals.
///
/// Coefficients are stored lowest degree first; the last stored coefficient
/// is never zero, so the zero polynomial is the empty list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| super::scalar(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UniPoly {
            coeffs: vec![Scalar::zero(), Scalar::one()],
        }
    }

    /// `a + b x`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `f / gcd(f, f')`, monic. Over a field of characteristic zero this has
    /// the same roots as `f`, each simple.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Primitive integer polynomial proportional to `self` (positive leading
    /// coefficient).
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !content.is_zero() {
            for c in ints.iter_mut() {
                *c /= &content;
            }
        }
        if ints.last().is_some_and(Signed::is_negative) {
            for c in ints.iter_mut() {
                *c = -&*c;
            }
        }
        ints
    }

    /// All distinct rational roots, sorted ascending.
    ///
    /// Roots are found modulo a small prime, lifted p-adically by Newton
    /// iteration, recovered by rational reconstruction and then checked by
    /// exact evaluation. A root `p/q` in lowest terms of the primitive
    /// integer form has `|p| <= |a_0|` and `|q| <= |a_d|`, so lifting past
    /// `2 max(|a_0|, |a_d|)^2` makes the reconstruction unique.
    pub fn rational_roots(&self) -> Vec<Scalar> {
        let mut roots = Vec::new();
        if self.is_constant() {
            return roots;
        }
        let mut f = self.squarefree_part();
        if f.coeffs[0].is_zero() {
            roots.push(Scalar::zero());
            f = f.div_rem(&UniPoly::x()).0;
        }
        if !f.is_constant() {
            roots.extend(nonzero_rational_roots(&f));
        }
        roots.sort();
        roots
    }
}

fn nonzero_rational_roots(f: &UniPoly) -> Vec<Scalar> {
    let ints = f.primitive_integer();
    let a0 = ints[0].abs();
    let ad = ints.last().expect("nonconstant").abs();
    let bound = a0.clone().max(ad.clone());
    let target: BigInt = BigInt::from(2) * &bound * &bound;

    let deriv: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();

    let prime = choose_prime(&ints, &deriv);
    let p = BigInt::from(prime);

    let mut out = Vec::new();
    for r0 in 0..prime {
        let r0 = BigInt::from(r0);
        if !eval_mod(&ints, &r0, &p).is_zero() {
            continue;
        }
        // Newton lifting: the root is simple mod p because f stays squarefree
        // mod p, so f'(r) is invertible at every stage.
        let mut r = r0;
        let mut modulus = p.clone();
        while modulus <= target {
            modulus = &modulus * &modulus;
            let fv = eval_mod(&ints, &r, &modulus);
            let dv = eval_mod(&deriv, &r, &modulus);
            let inv = mod_inverse(&dv, &modulus).expect("derivative invertible at a simple root");
            r = (&r - fv * inv).mod_floor(&modulus);
        }
        if let Some(candidate) = rational_reconstruction(&r, &modulus) {
            if f.eval(&candidate).is_zero() {
                out.push(candidate);
            }
        }
    }
    out
}

fn eval_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// A prime not dividing the leading coefficient for which `f` stays
/// squarefree. Small primes keep the brute-force root search cheap.
fn choose_prime(ints: &[BigInt], deriv: &[BigInt]) -> u64 {
    let lead = ints.last().expect("nonconstant");
    (3u64..)
        .filter(|&q| is_prime(q))
        .find(|&q| {
            let qb = BigInt::from(q);
            if lead.mod_floor(&qb).is_zero() {
                return false;
            }
            let f = reduce_mod(ints, q);
            let d = reduce_mod(deriv, q);
            poly_gcd_mod(f, d, q).len() == 1
        })
        .expect("some prime works for a squarefree polynomial")
}

fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

fn reduce_mod(coeffs: &[BigInt], q: u64) -> Vec<u64> {
    let qb = BigInt::from(q);
    let mut v: Vec<u64> = coeffs
        .iter()
        .map(|c| u64::try_from(c.mod_floor(&qb)).expect("residue fits"))
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    acc
}

fn poly_gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> Vec<u64> {
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), q - 2, q);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = a.last().unwrap() * inv % q;
            for (i, bi) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + q - c * bi % q) % q;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Finds `p/q` with `p ≡ q r (mod m)` and `|p|, |q| <= sqrt(m/2)`.
fn rational_reconstruction(r: &BigInt, m: &BigInt) -> Option<Scalar> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    let two = BigInt::from(2);
    while &two * &r1 * &r1 > *m {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &two * &t1 * &t1 > *m {
        return None;
    }
    Some(Scalar::new(r1, t1))
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{ratio, scalar};

    #[test]
    fn zero_is_empty() {
        assert!(UniPoly::from_i64(&[0, 0]).is_zero());
        assert_eq!(UniPoly::zero().degree(), None);
        assert_eq!(UniPoly::from_i64(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn division_identity() {
        let a = UniPoly::from_i64(&[3, -2, 0, 5, 1]);
        let b = UniPoly::from_i64(&[1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        // (x-1)(x+2) and (x-1)(2x+3)
        let a = &UniPoly::from_i64(&[-1, 1]) * &UniPoly::from_i64(&[2, 1]);
        let b = &UniPoly::from_i64(&[-1, 1]) * &UniPoly::from_i64(&[3, 2]);
        assert_eq!(a.gcd(&b), UniPoly::from_i64(&[-1, 1]));
        assert_eq!(UniPoly::zero().gcd(&UniPoly::zero()), UniPoly::zero());
    }

    #[test]
    fn squarefree_part_drops_multiplicity() {
        let x1 = UniPoly::from_i64(&[-1, 1]);
        let cube = &(&x1 * &x1) * &x1;
        assert_eq!(cube.squarefree_part(), x1);
    }

    #[test]
    fn rational_roots_mixed() {
        // (2x - 3)(x + 5) x (x^2 - 2)
        let f = &(&(&UniPoly::from_i64(&[-3, 2]) * &UniPoly::from_i64(&[5, 1])) * &UniPoly::x())
            * &UniPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(f.rational_roots(), vec![scalar(-5), scalar(0), ratio(3, 2)]);
    }

    #[test]
    fn rational_roots_large_coefficients() {
        // (12345 x - 678910)(x - 1/7)
        let f =
            &UniPoly::from_i64(&[-678910, 12345]) * &UniPoly::new(vec![ratio(-1, 7), scalar(1)]);
        assert_eq!(f.rational_roots(), vec![ratio(1, 7), ratio(678910, 12345)]);
    }

    #[test]
    fn no_rational_roots() {
        assert!(UniPoly::from_i64(&[1, 0, 1]).rational_roots().is_empty());
        assert!(UniPoly::from_i64(&[5]).rational_roots().is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(UniPoly::from_i64(&[-2, 0, 1]).to_string(), "x^2 - 2");
        assert_eq!(UniPoly::from_i64(&[1, -3]).to_string(), "-3x + 1");
    }
}
