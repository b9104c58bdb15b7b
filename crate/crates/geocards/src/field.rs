//! Exact arithmetic in GF(p^m).
//!
//! Elements are residues of Z_p[x] modulo a fixed monic irreducible
//! polynomial; for m = 1 the modulus is x and elements behave as plain
//! residues mod p. The modulus is not configurable: each order gets a
//! canonical one (see [`FiniteField::new`]), so two fields of the same order
//! are interchangeable and their elements interoperate.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::{Error, Result};

/// Splits `q` into `(p, m)` with `p` prime and `q = p^m`, if possible.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    let mut f = 2u64;
    while f.checked_mul(f).is_some_and(|ff| ff <= q) {
        if q % f == 0 {
            p = f;
            break;
        }
        f += 1;
    }
    let mut m = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

// ---------------------------------------------------------------------------
// Polynomial helpers. Coefficient vectors are little-endian over Z_p and may
// carry trailing zeros; `poly_deg` is None for the zero polynomial.
// ---------------------------------------------------------------------------

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of a multiple of p");
    s0.rem_euclid(p as i128) as u64
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if poly_deg(a).is_none() || poly_deg(b).is_none() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let v = (out[i + j] as u128 + x as u128 * y as u128) % p as u128;
            out[i + j] = v as u64;
        }
    }
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0) % p;
            let y = b.get(i).copied().unwrap_or(0) % p;
            (x + p - y) % p
        })
        .collect()
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let bd = poly_deg(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod_p(b[bd], p);
    let mut r: Vec<u64> = a.iter().map(|&c| c % p).collect();
    let ad = match poly_deg(&r) {
        Some(d) if d >= bd => d,
        _ => return (Vec::new(), r),
    };
    let mut q = vec![0u64; ad - bd + 1];
    while let Some(rd) = poly_deg(&r) {
        if rd < bd {
            break;
        }
        let factor = (r[rd] as u128 * lead_inv as u128 % p as u128) as u64;
        q[rd - bd] = factor;
        for i in 0..=bd {
            if b[i] == 0 {
                continue;
            }
            let sub = factor as u128 * b[i] as u128 % p as u128;
            let v = (r[i + rd - bd] as u128 + p as u128 - sub) % p as u128;
            r[i + rd - bd] = v as u64;
        }
    }
    (q, r)
}

fn poly_rem_fixed(a: &[u64], m: &[u64], p: u64, out_len: usize) -> Vec<u64> {
    let (_, mut r) = poly_divmod(a, m, p);
    r.resize(out_len, 0);
    r.truncate(out_len);
    r
}

/// Inverse of `a` modulo `modulus` via the extended Euclidean algorithm.
/// Returns None for the zero polynomial.
fn poly_inverse(a: &[u64], modulus: &[u64], p: u64) -> Option<Vec<u64>> {
    poly_deg(a)?;
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while let Some(d) = poly_deg(&r1) {
        if d == 0 {
            break;
        }
        let (q, r) = poly_divmod(&r0, &r1, p);
        let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let d = poly_deg(&r1)?;
    debug_assert_eq!(d, 0, "gcd with an irreducible modulus is a unit");
    Some(poly_mul(&s1, &[inv_mod_p(r1[0], p)], p))
}

fn digits(mut value: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(value % base);
        value /= base;
    }
    out
}

fn poly_is_irreducible(f: &[u64], p: u64, m: usize) -> bool {
    // Trial division: a reducible polynomial of degree m has a monic factor
    // of degree at most m / 2.
    for d in 1..=m / 2 {
        for value in 0..p.pow(d as u32) {
            let mut g = digits(value, p, d);
            g.push(1);
            let (_, r) = poly_divmod(f, &g, p);
            if poly_deg(&r).is_none() {
                return false;
            }
        }
    }
    true
}

/// The canonical modulus for GF(p^m): among all monic irreducible degree-m
/// polynomials over Z_p, the one whose coefficient vector, read as a
/// little-endian base-p integer, is smallest. For m = 1 it is x itself.
fn canonical_modulus(p: u64, m: u32) -> Vec<u64> {
    if m == 1 {
        return vec![0, 1];
    }
    let m = m as usize;
    for value in 0..p.pow(m as u32) {
        let mut f = digits(value, p, m);
        f.push(1);
        if poly_is_irreducible(&f, p, m) {
            return f;
        }
    }
    unreachable!("monic irreducible polynomials of degree {m} exist over Z_{p}")
}

#[derive(Debug)]
struct FieldInner {
    characteristic: u64,
    degree: u32,
    order: u64,
    modulus: Vec<u64>,
}

/// The finite field of a prime-power order.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<FieldInner>,
}

impl FiniteField {
    /// Builds GF(q), or `Error::NotPrimePower` if q is not a prime power.
    ///
    /// The representation is pinned: GF(p^m) is Z_p[x] modulo the canonical
    /// modulus, the lexicographically least monic irreducible polynomial of
    /// degree m (coefficients compared from the constant term up). Fixing
    /// the modulus makes element indices stable across runs, which the rest
    /// of the crate relies on for reproducible announcements.
    pub fn new(order: u64) -> Result<Self> {
        let (p, m) = prime_power_decompose(order).ok_or(Error::NotPrimePower(order))?;
        Ok(FiniteField {
            inner: Arc::new(FieldInner {
                characteristic: p,
                degree: m,
                order,
                modulus: canonical_modulus(p, m),
            }),
        })
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    /// Little-endian coefficients of the modulus, length `degree() + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0).expect("0 < order")
    }

    pub fn one(&self) -> FieldElement {
        self.element(1.min(self.inner.order - 1))
            .expect("1 < order for every field")
    }

    /// The element whose base-p digit expansion is `index`; indices run
    /// 0..order and order the field canonically (0 first, 1 second).
    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.inner.order {
            return Err(Error::IndexOutOfRange {
                index,
                limit: self.inner.order,
            });
        }
        Ok(FieldElement {
            coeffs: digits(
                index,
                self.inner.characteristic,
                self.inner.degree as usize,
            ),
            field: self.clone(),
        })
    }

    /// Builds an element from little-endian coefficients over Z_p. Shorter
    /// slices are zero-padded; entries are reduced mod p; slices longer than
    /// the field degree are rejected.
    pub fn element_from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        let m = self.inner.degree as usize;
        if coeffs.len() > m {
            return Err(Error::BadParams(format!(
                "{} coefficients for a degree-{m} field",
                coeffs.len()
            )));
        }
        let p = self.inner.characteristic;
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % p).collect();
        c.resize(m, 0);
        Ok(FieldElement {
            coeffs: c,
            field: self.clone(),
        })
    }

    /// All elements in index order.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.inner.order)
            .map(|i| self.element(i).expect("index in range"))
            .collect()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        // The modulus is canonical, so equal orders mean equal fields.
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.order == other.inner.order
    }
}

impl Eq for FiniteField {}

impl Hash for FiniteField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.order.hash(state);
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.order)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An element of a [`FiniteField`]. Cheap to clone; carries its field.
#[derive(Clone)]
pub struct FieldElement {
    field: FiniteField,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Little-endian coefficients over Z_p, length `field().degree()`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// The canonical index: coefficients read as a base-p integer.
    pub fn index(&self) -> u64 {
        let p = self.field.characteristic();
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.index() == 1
    }

    fn check_same_field(&self, rhs: &Self) -> Result<()> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.order(),
                right: rhs.field.order(),
            })
        }
    }

    fn from_poly(field: &FiniteField, poly: &[u64]) -> Self {
        let m = field.degree() as usize;
        let coeffs = poly_rem_fixed(poly, field.modulus(), field.characteristic(), m);
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_field(rhs)?;
        let p = self.field.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&x, &y)| (x + y) % p)
            .collect();
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        let p = self.field.characteristic();
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_field(rhs)?;
        let p = self.field.characteristic();
        let prod = poly_mul(&self.coeffs, &rhs.coeffs, p);
        Ok(Self::from_poly(&self.field, &prod))
    }

    pub fn inv(&self) -> Result<Self> {
        let inv = poly_inverse(
            &self.coeffs,
            self.field.modulus(),
            self.field.characteristic(),
        )
        .ok_or(Error::DivisionByZero {
            order: self.field.order(),
        })?;
        Ok(Self::from_poly(&self.field, &inv))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.mul(&rhs.inv()?)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.coeffs.hash(state);
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.order(), self.index()).cmp(&(other.field.order(), other.index()))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{:?}", self.index(), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power_decompose(0), None);
        assert_eq!(prime_power_decompose(1), None);
        assert_eq!(prime_power_decompose(2), Some((2, 1)));
        assert_eq!(prime_power_decompose(4), Some((2, 2)));
        assert_eq!(prime_power_decompose(6), None);
        assert_eq!(prime_power_decompose(8), Some((2, 3)));
        assert_eq!(prime_power_decompose(9), Some((3, 2)));
        assert_eq!(prime_power_decompose(12), None);
        assert_eq!(prime_power_decompose(27), Some((3, 3)));
        assert_eq!(prime_power_decompose(1024), Some((2, 10)));
        assert_eq!(prime_power_decompose(65537), Some((65537, 1)));
    }

    #[test]
    fn canonical_moduli_are_the_expected_polynomials() {
        // Little-endian; e.g. [1, 1, 1] is x^2 + x + 1.
        let cases: &[(u64, &[u64])] = &[
            (2, &[0, 1]),
            (7, &[0, 1]),
            (4, &[1, 1, 1]),
            (8, &[1, 1, 0, 1]),
            (9, &[1, 0, 1]),
            (16, &[1, 1, 0, 0, 1]),
            (25, &[2, 0, 1]),
            (27, &[1, 2, 0, 1]),
        ];
        for &(q, want) in cases {
            assert_eq!(FiniteField::new(q).unwrap().modulus(), want, "GF({q})");
        }
    }

    #[test]
    fn non_prime_powers_are_rejected() {
        for q in [0, 1, 6, 10, 12, 15, 100] {
            assert_eq!(FiniteField::new(q).unwrap_err(), Error::NotPrimePower(q));
        }
    }

    #[test]
    fn gf4_multiplication_table() {
        let f = FiniteField::new(4).unwrap();
        let want = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
        for i in 0..4u64 {
            for j in 0..4u64 {
                let prod = f
                    .element(i)
                    .unwrap()
                    .mul(&f.element(j).unwrap())
                    .unwrap();
                assert_eq!(prod.index(), want[i as usize][j as usize], "{i} * {j}");
            }
        }
    }

    #[test]
    fn every_nonzero_element_has_an_inverse() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            for e in f.elements().into_iter().skip(1) {
                let inv = e.inv().unwrap();
                assert!(e.mul(&inv).unwrap().is_one(), "GF({q}), element {e}");
            }
            assert_eq!(
                f.zero().inv().unwrap_err(),
                Error::DivisionByZero { order: q }
            );
        }
    }

    #[test]
    fn element_index_roundtrips() {
        let f = FiniteField::new(27).unwrap();
        for (i, e) in f.elements().iter().enumerate() {
            assert_eq!(e.index(), i as u64);
            assert_eq!(&f.element(i as u64).unwrap(), e);
        }
        assert_eq!(
            f.element(27).unwrap_err(),
            Error::IndexOutOfRange {
                index: 27,
                limit: 27
            }
        );
    }

    #[test]
    fn coeff_construction_pads_and_reduces() {
        let f = FiniteField::new(9).unwrap();
        assert_eq!(f.element_from_coeffs(&[4]).unwrap().index(), 1);
        assert_eq!(f.element_from_coeffs(&[1, 2]).unwrap().index(), 7);
        assert!(f.element_from_coeffs(&[0, 0, 1]).is_err());
    }

    #[test]
    fn cross_field_operations_are_rejected() {
        let a = FiniteField::new(2).unwrap().one();
        let b = FiniteField::new(3).unwrap().one();
        assert_eq!(
            a.add(&b).unwrap_err(),
            Error::FieldMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn fields_of_equal_order_are_equal() {
        let a = FiniteField::new(16).unwrap();
        let b = FiniteField::new(16).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.element(5).unwrap(), b.element(5).unwrap());
        assert!(a.element(5).unwrap() < b.element(6).unwrap());
    }

    proptest! {
        #[test]
        fn ring_axioms_hold_in_gf8_and_gf9(q in prop::sample::select(vec![8u64, 9]),
                                           i in 0u64..8, j in 0u64..8, l in 0u64..8) {
            let f = FiniteField::new(q).unwrap();
            let (a, b, c) = (
                f.element(i % q).unwrap(),
                f.element(j % q).unwrap(),
                f.element(l % q).unwrap(),
            );
            // commutativity and associativity
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            // distributivity
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            // subtraction inverts addition
            prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a);
        }
    }
}
