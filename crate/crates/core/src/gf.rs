//! Finite fields GF(p^m), enough of them to build Paley graphs.
//!
//! Elements are polynomials over GF(p) of degree < m, stored least-significant
//! coefficient first and reduced modulo a fixed monic irreducible polynomial.
//! The modulus is the lexicographically least monic irreducible of degree m,
//! which makes every construction built on top of a field reproducible.
//!
//! Elements are enumerated by index: element `i` has coefficients equal to the
//! base-p digits of `i`, least significant digit first. For a prime field that
//! is just `0, 1, ..., p - 1`. Paley graph vertex numbering follows this order.

use thiserror::Error;

/// Largest field order we are willing to build (square tables are exhaustive).
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    TooLarge(u64),
    #[error("no irreducible polynomial of degree {m} over GF({p}) was found")]
    NoIrreducible { p: u64, m: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero is excluded from the square test")]
    ZeroSquareQuery,
    #[error("element index {index} out of range for a field of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },
}

/// Deterministic trial division; plenty for the orders used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `(p, m)` with `q = p^m` and `p` prime, if such a pair exists.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    // smallest prime factor
    let p = (2..)
        .take_while(|d: &u64| d.saturating_mul(*d) <= q)
        .find(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let mut rest = q;
    let mut m = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// An element of a [`GaloisField`]: `m` coefficients in `0..p`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u32,
    m: u32,
    order: u32,
    /// Monic, `m + 1` coefficients, constant term first.
    modulus: Vec<u32>,
    /// `squares[i]` is true iff element `i` is a nonzero square.
    squares: Vec<bool>,
}

impl GaloisField {
    /// Builds GF(p^m) with the lexicographically least monic irreducible modulus.
    pub fn new(p: u64, m: u32) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let order = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(GfError::TooLarge(p.saturating_pow(m)))?;
        let p32 = p as u32;
        let modulus = least_irreducible(p32, m).ok_or(GfError::NoIrreducible { p, m })?;
        let mut field = GaloisField {
            p: p32,
            m,
            order: order as u32,
            modulus,
            squares: Vec::new(),
        };
        field.squares = field.square_table();
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self, GfError> {
        let (p, m) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic modulus polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = 1;
        e
    }

    /// Element number `index` in the fixed enumeration order.
    pub fn element(&self, index: u32) -> Result<FieldElement, GfError> {
        if index >= self.order {
            return Err(GfError::IndexOutOfRange {
                index: index as u64,
                order: self.order as u64,
            });
        }
        Ok(self.element_unchecked(index))
    }

    fn element_unchecked(&self, mut index: u32) -> FieldElement {
        let mut coeffs = vec![0; self.m as usize];
        for c in coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        FieldElement { coeffs }
    }

    /// Position of `a` in the enumeration order.
    pub fn index_of(&self, a: &FieldElement) -> u32 {
        a.coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(|i| self.element_unchecked(i))
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.coeffs.len() == self.m as usize && a.coeffs.iter().all(|&c| c < self.p)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a));
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| if x == 0 { 0 } else { self.p - x })
            .collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.p as u64;
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let mut coeffs = poly_rem(&prod, &self.modulus, self.p);
        coeffs.resize(m, 0);
        FieldElement { coeffs }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `a^(q-2)`.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.pow(a, self.order as u64 - 2))
    }

    /// Whether `a` equals `b^2` for some nonzero `b`. Zero is rejected.
    pub fn is_nonzero_square(&self, a: &FieldElement) -> Result<bool, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroSquareQuery);
        }
        Ok(self.squares[self.index_of(a) as usize])
    }

    /// Indices of all nonzero squares, ascending.
    pub fn nonzero_square_indices(&self) -> Vec<u32> {
        (0..self.order)
            .filter(|&i| self.squares[i as usize])
            .collect()
    }

    fn square_table(&self) -> Vec<bool> {
        let mut table = vec![false; self.order as usize];
        for b in self.elements().skip(1) {
            let sq = self.mul(&b, &b);
            table[self.index_of(&sq) as usize] = true;
        }
        table
    }
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p). Coefficients
/// constant term first; the result has length `deg(b)`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    if r.len() > db {
        for top in (db..r.len()).rev() {
            let lead = r[top] % p64;
            if lead == 0 {
                continue;
            }
            let shift = top - db;
            for (i, &bc) in b.iter().enumerate() {
                let sub = lead * bc as u64 % p64;
                r[shift + i] = (r[shift + i] + p64 - sub) % p64;
            }
        }
    }
    r.truncate(db);
    r.resize(db, 0);
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `index`.
fn monic_from_index(p: u32, deg: u32, mut index: u64) -> Vec<u32> {
    let mut coeffs = vec![0u32; deg as usize + 1];
    for c in coeffs.iter_mut().take(deg as usize) {
        *c = (index % p as u64) as u32;
        index /= p as u64;
    }
    coeffs[deg as usize] = 1;
    coeffs
}

/// Irreducibility by trial division against every monic divisor of degree
/// `1..=deg/2`. Degree one divisors are exactly the root test.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d);
        for idx in 0..count {
            let g = monic_from_index(p, d, idx);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, m: u32) -> Option<Vec<u32>> {
    let count = (p as u64).pow(m);
    (0..count)
        .map(|idx| monic_from_index(p, m, idx))
        .find(|f| is_irreducible(f, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes_and_prime_powers() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(101), Some((101, 1)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(15), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        let f = GaloisField::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.order(), 9);
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = GaloisField::new(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        let f101 = GaloisField::new(101, 1).unwrap();
        assert_eq!(f101.order(), 101);
    }

    #[test]
    fn gf9_x_squared_is_two() {
        let f = GaloisField::new(3, 2).unwrap();
        let x = f.element(3).unwrap();
        assert_eq!(x.coeffs(), &[0, 1]);
        let xx = f.mul(&x, &x);
        assert_eq!(xx.coeffs(), &[2, 0]);
    }

    #[test]
    fn gf5_inverse_of_two() {
        let f = GaloisField::new(5, 1).unwrap();
        let two = f.element(2).unwrap();
        assert_eq!(f.inv(&two).unwrap(), f.element(3).unwrap());
        assert_eq!(f.inv(&f.zero()), Err(GfError::ZeroInverse));
    }

    #[test]
    fn gf5_squares() {
        let f = GaloisField::new(5, 1).unwrap();
        let e = |i| f.element(i).unwrap();
        assert!(f.is_nonzero_square(&e(4)).unwrap());
        assert!(f.is_nonzero_square(&e(1)).unwrap());
        assert!(!f.is_nonzero_square(&e(2)).unwrap());
        assert!(!f.is_nonzero_square(&e(3)).unwrap());
        assert_eq!(f.is_nonzero_square(&f.zero()), Err(GfError::ZeroSquareQuery));
    }

    #[test]
    fn square_count_matches_brute_force() {
        for q in [5u64, 9, 13, 25, 27, 49, 81, 125] {
            let f = GaloisField::with_order(q).unwrap();
            // independent enumeration: collect b*b for every nonzero b
            let mut seen = std::collections::BTreeSet::new();
            for b in f.elements().skip(1) {
                seen.insert(f.index_of(&f.mul(&b, &b)));
            }
            assert_eq!(seen.len() as u64, (q - 1) / 2, "q = {q}");
            assert_eq!(
                f.nonzero_square_indices(),
                seen.into_iter().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn minus_one_is_square_when_q_is_1_mod_4() {
        for q in [5u64, 9, 13, 17, 25, 29, 37, 41, 49, 53, 61, 81, 101] {
            let f = GaloisField::with_order(q).unwrap();
            let minus_one = f.neg(&f.one());
            assert!(f.is_nonzero_square(&minus_one).unwrap(), "q = {q}");
        }
        let f = GaloisField::with_order(7).unwrap();
        assert!(!f.is_nonzero_square(&f.neg(&f.one())).unwrap());
    }

    #[test]
    fn irreducible_moduli_have_no_proper_factors() {
        for (p, m) in [(2u64, 4u32), (2, 6), (3, 4), (5, 4), (2, 8)] {
            let f = GaloisField::new(p, m).unwrap();
            assert!(is_irreducible(f.modulus(), p as u32));
            // a field: every nonzero element invertible
            for a in f.elements().skip(1).take(50) {
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one());
            }
        }
        // x^4 + 1 = (x^2 + 1)^2 over GF(2) has no roots but is reducible
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 2));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(GaloisField::new(15, 1).unwrap_err(), GfError::NotPrime(15));
        assert_eq!(GaloisField::new(3, 0).unwrap_err(), GfError::ZeroDegree);
        assert_eq!(
            GaloisField::with_order(15).unwrap_err(),
            GfError::NotPrimePower(15)
        );
        assert!(matches!(
            GaloisField::new(2, 21),
            Err(GfError::TooLarge(_))
        ));
        let f = GaloisField::new(3, 2).unwrap();
        assert!(f.element(9).is_err());
    }

    #[test]
    fn enumeration_round_trips() {
        let f = GaloisField::new(3, 3).unwrap();
        for i in 0..f.order() {
            assert_eq!(f.index_of(&f.element(i).unwrap()), i);
        }
    }

    fn field_and_triple() -> impl Strategy<Value = (u64, u32, u32, u32)> {
        prop::sample::select(vec![5u64, 8, 9, 16, 25, 27, 49, 101, 121, 243]).prop_flat_map(|q| {
            let q32 = q as u32;
            (Just(q), 0..q32, 0..q32, 0..q32)
        })
    }

    proptest! {
        #[test]
        fn field_axioms((q, i, j, l) in field_and_triple()) {
            let f = GaloisField::with_order(q).unwrap();
            let (a, b, c) = (f.element(i).unwrap(), f.element(j).unwrap(), f.element(l).unwrap());
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
            prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            prop_assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            prop_assert_eq!(f.add(&a, &f.zero()), a.clone());
            prop_assert_eq!(f.mul(&a, &f.one()), a.clone());
            prop_assert!(f.add(&a, &f.neg(&a)).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
        }

        #[test]
        fn frobenius_is_additive((q, i, j, _l) in field_and_triple()) {
            let f = GaloisField::with_order(q).unwrap();
            let p = f.characteristic() as u64;
            let (a, b) = (f.element(i).unwrap(), f.element(j).unwrap());
            prop_assert_eq!(
                f.pow(&f.add(&a, &b), p),
                f.add(&f.pow(&a, p), &f.pow(&b, p))
            );
        }
    }
}
