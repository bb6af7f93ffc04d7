//! Octonion arithmetic.
//!
//! The multiplication table below is the canonical convention of this crate:
//! `e1 e2 = e4`, `e1 e3 = e5`, `e2 e3 = e6` and `(e1 e2) e3 = e7`. A second,
//! independent product built from the Cayley–Dickson doubling rule over
//! quaternion pairs is provided as a cross-check; it is mapped onto the table
//! through a signed basis correspondence derived at first use.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Products of imaginary units: `UNIT_TABLE[i-1][j-1] = (sign, k)` encodes
/// `e_i e_j = sign * e_k` with `e_0 = 1`.
const UNIT_TABLE: [[(i8, u8); 7]; 7] = [
    [(-1, 0), (1, 4), (1, 5), (-1, 2), (-1, 3), (-1, 7), (1, 6)],
    [(-1, 4), (-1, 0), (1, 6), (1, 1), (1, 7), (-1, 3), (-1, 5)],
    [(-1, 5), (-1, 6), (-1, 0), (-1, 7), (1, 1), (1, 2), (1, 4)],
    [(1, 2), (-1, 1), (1, 7), (-1, 0), (-1, 6), (1, 5), (-1, 3)],
    [(1, 3), (-1, 7), (-1, 1), (1, 6), (-1, 0), (-1, 4), (1, 2)],
    [(1, 7), (1, 3), (-1, 2), (-1, 5), (1, 4), (-1, 0), (-1, 1)],
    [(-1, 6), (1, 5), (-1, 4), (1, 3), (-1, 2), (1, 1), (-1, 0)],
];

/// Full 8x8 basis product table including the real unit.
fn basis_product(i: usize, j: usize) -> (f64, usize) {
    match (i, j) {
        (0, j) => (1.0, j),
        (i, 0) => (1.0, i),
        (i, j) => {
            let (s, k) = UNIT_TABLE[i - 1][j - 1];
            (f64::from(s), k as usize)
        }
    }
}

/// An element of the octonions, stored as eight real coordinates.
///
/// Coordinate 0 is the real part; coordinates 1..=7 multiply `e1..e7`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Octonion([f64; 8]);

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub const fn new(coords: [f64; 8]) -> Self {
        Octonion(coords)
    }

    pub const fn real(x: f64) -> Self {
        Octonion([x, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    /// The basis element `e_i`; `basis(0)` is the real unit.
    ///
    /// Panics if `i > 7`.
    pub fn basis(i: usize) -> Self {
        assert!(i < 8, "octonion basis index {i} out of range");
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion(c)
    }

    pub const fn coords(&self) -> [f64; 8] {
        self.0
    }

    pub const fn re(&self) -> f64 {
        self.0[0]
    }

    /// Imaginary part as an octonion with zero real coordinate.
    pub fn im(&self) -> Self {
        let mut c = self.0;
        c[0] = 0.0;
        Octonion(c)
    }

    pub fn conj(&self) -> Self {
        let c = self.0;
        Octonion([c[0], -c[1], -c[2], -c[3], -c[4], -c[5], -c[6], -c[7]])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of the coordinate vectors.
    pub fn dot(&self, other: &Octonion) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Octonion(self.0.map(|x| x * s))
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Product following the multiplication table. Each coordinate is
    /// accumulated in double-double precision and rounded once.
    pub fn mul_table(&self, other: &Octonion) -> Octonion {
        let a = &self.0;
        let b = &other.0;
        let mut out = [Acc::ZERO; 8];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let (s, k) = basis_product(i, j);
                out[k] = out[k].add_prod(s * ai, bj);
            }
        }
        Octonion(out.map(Acc::value))
    }

    /// Product computed by Cayley–Dickson doubling,
    /// `(a,b)(c,d) = (ac - d conj(b), conj(a) d + c b)` over quaternion pairs,
    /// then mapped back onto the table basis.
    pub fn mul_cayley_dickson(&self, other: &Octonion) -> Octonion {
        let corr = correspondence();
        let x = corr.to_pair(self);
        let y = corr.to_pair(other);
        corr.from_pair(&doubling_product(&x, &y))
    }

    /// Multiplicative inverse `conj(a) / |a|^2`.
    pub fn inverse(&self) -> Result<Octonion> {
        let n2 = self.norm_sqr();
        if !(n2 >= 1e-300) {
            return Err(Error::Domain(format!(
                "octonion with squared norm {n2:e} is not invertible"
            )));
        }
        Ok(self.conj().scale(1.0 / n2))
    }
}

impl Index<usize> for Octonion {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<f64> for Octonion {
    fn from(x: f64) -> Self {
        Octonion::real(x)
    }
}

impl From<[f64; 8]> for Octonion {
    fn from(c: [f64; 8]) -> Self {
        Octonion(c)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(rhs.0) {
            *x += y;
        }
        Octonion(c)
    }
}

impl AddAssign for Octonion {
    fn add_assign(&mut self, rhs: Octonion) {
        *self = *self + rhs;
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(rhs.0) {
            *x -= y;
        }
        Octonion(c)
    }
}

impl SubAssign for Octonion {
    fn sub_assign(&mut self, rhs: Octonion) {
        *self = *self - rhs;
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(self.0.map(|x| -x))
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        self.mul_table(&rhs)
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: f64) -> Octonion {
        self.scale(rhs)
    }
}

impl Mul<Octonion> for f64 {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        rhs.scale(self)
    }
}

impl Div<f64> for Octonion {
    type Output = Octonion;
    fn div(self, rhs: f64) -> Octonion {
        Octonion(self.0.map(|x| x / rhs))
    }
}

impl std::iter::Sum for Octonion {
    fn sum<I: Iterator<Item = Octonion>>(iter: I) -> Octonion {
        iter.fold(Octonion::ZERO, |acc, x| acc + x)
    }
}

/// `(ab)c - a(bc)` for a fixed triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Associator {
    pub value: Octonion,
}

pub fn associator(a: &Octonion, b: &Octonion, c: &Octonion) -> Associator {
    Associator {
        value: (*a * *b) * *c - *a * (*b * *c),
    }
}

// ---------------------------------------------------------------------------
// Cayley–Dickson cross-check

type Quat = [f64; 4];

/// Compensated sum of products (two-product by FMA, two-sum), so a sum of a
/// few products is rounded essentially once.
#[derive(Clone, Copy, Debug)]
struct Acc {
    hi: f64,
    lo: f64,
}

impl Acc {
    const ZERO: Acc = Acc { hi: 0.0, lo: 0.0 };

    fn add(self, x: f64) -> Acc {
        let s = self.hi + x;
        let t = s - self.hi;
        let e = (self.hi - (s - t)) + (x - t);
        Acc { hi: s, lo: self.lo + e }
    }

    fn add_prod(self, x: f64, y: f64) -> Acc {
        let p = x * y;
        let e = x.mul_add(y, -p);
        let a = self.add(p);
        Acc { hi: a.hi, lo: a.lo + e }
    }

    fn merge(self, other: Acc, sign: f64) -> Acc {
        let a = self.add(sign * other.hi);
        Acc { hi: a.hi, lo: a.lo + sign * other.lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn quat_mul(a: &Quat, b: &Quat) -> [Acc; 4] {
    let dot = |terms: [(f64, f64, f64); 4]| {
        terms.iter().fold(Acc::ZERO, |acc, &(s, x, y)| acc.add_prod(s * x, y))
    };
    [
        dot([(1.0, a[0], b[0]), (-1.0, a[1], b[1]), (-1.0, a[2], b[2]), (-1.0, a[3], b[3])]),
        dot([(1.0, a[0], b[1]), (1.0, a[1], b[0]), (1.0, a[2], b[3]), (-1.0, a[3], b[2])]),
        dot([(1.0, a[0], b[2]), (-1.0, a[1], b[3]), (1.0, a[2], b[0]), (1.0, a[3], b[1])]),
        dot([(1.0, a[0], b[3]), (1.0, a[1], b[2]), (-1.0, a[2], b[1]), (1.0, a[3], b[0])]),
    ]
}

fn quat_conj(a: &Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Pair-basis coordinates: `[p0, p1, p2, p3, q0, q1, q2, q3]` for `(p, q)`.
type Pair = [f64; 8];

fn split(x: &Pair) -> (Quat, Quat) {
    ([x[0], x[1], x[2], x[3]], [x[4], x[5], x[6], x[7]])
}

fn doubling_product(x: &Pair, y: &Pair) -> Pair {
    let (a, b) = split(x);
    let (c, d) = split(y);
    let ac = quat_mul(&a, &c);
    let db = quat_mul(&d, &quat_conj(&b));
    let ad = quat_mul(&quat_conj(&a), &d);
    let cb = quat_mul(&c, &b);
    let mut out = [0.0; 8];
    for k in 0..4 {
        out[k] = ac[k].merge(db[k], -1.0).value();
        out[k + 4] = ad[k].merge(cb[k], 1.0).value();
    }
    out
}

/// Signed permutation taking table basis element `e_k` to
/// `sign[k] * pair_unit[index[k]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisCorrespondence {
    pub index: [usize; 8],
    pub sign: [f64; 8],
}

impl BasisCorrespondence {
    fn to_pair(&self, a: &Octonion) -> Pair {
        let mut p = [0.0; 8];
        for k in 0..8 {
            p[self.index[k]] = self.sign[k] * a.0[k];
        }
        p
    }

    fn from_pair(&self, p: &Pair) -> Octonion {
        let mut c = [0.0; 8];
        for k in 0..8 {
            c[k] = self.sign[k] * p[self.index[k]];
        }
        Octonion(c)
    }
}

/// Reads a pair vector that must be a signed pair-basis unit.
fn as_signed_unit(p: &Pair) -> Option<(usize, f64)> {
    let mut found = None;
    for (i, &x) in p.iter().enumerate() {
        if x != 0.0 {
            if found.is_some() || x.abs() != 1.0 {
                return None;
            }
            found = Some((i, x));
        }
    }
    found
}

/// Derives the correspondence from the generating triple
/// `e1 -> (i,0)`, `e2 -> (j,0)`, `e3 -> (0,1)`: the remaining units follow
/// from `e4 = e1 e2`, `e5 = e1 e3`, `e6 = e2 e3`, `e7 = e4 e3`, and the
/// result is checked against all 64 table products.
fn derive_correspondence() -> BasisCorrespondence {
    let unit = |i: usize| {
        let mut p = [0.0; 8];
        p[i] = 1.0;
        p
    };
    let mut images: [Pair; 8] = [[0.0; 8]; 8];
    images[0] = unit(0);
    images[1] = unit(1);
    images[2] = unit(2);
    images[3] = unit(4);
    images[4] = doubling_product(&images[1], &images[2]);
    images[5] = doubling_product(&images[1], &images[3]);
    images[6] = doubling_product(&images[2], &images[3]);
    images[7] = doubling_product(&images[4], &images[3]);

    let mut corr = BasisCorrespondence {
        index: [0; 8],
        sign: [0.0; 8],
    };
    for (k, img) in images.iter().enumerate() {
        let (i, s) = as_signed_unit(img).expect("doubling of units must give a signed unit");
        corr.index[k] = i;
        corr.sign[k] = s;
    }
    for i in 0..8 {
        for j in 0..8 {
            let (s, k) = basis_product(i, j);
            let lhs = doubling_product(&images[i], &images[j]);
            let rhs = images[k].map(|x| s * x);
            assert_eq!(
                lhs, rhs,
                "doubling rule disagrees with the table at e{i} e{j}"
            );
        }
    }
    corr
}

/// The table-to-pair correspondence used by [`Octonion::mul_cayley_dickson`].
pub fn correspondence() -> &'static BasisCorrespondence {
    static CORR: OnceLock<BasisCorrespondence> = OnceLock::new();
    CORR.get_or_init(derive_correspondence)
}

// ---------------------------------------------------------------------------
// Literal formats

impl fmt::Display for Octonion {
    /// Textual literal `a0 + a1 e1 + ... + a7 e7`; zero imaginary terms are
    /// omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0[0])?;
        for k in 1..8 {
            let x = self.0[k];
            if x == 0.0 {
                continue;
            }
            if x.is_sign_negative() {
                write!(f, " - {} e{k}", -x)?;
            } else {
                write!(f, " + {} e{k}", x)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Octonion {
    type Err = Error;

    /// Accepts `[a0,...,a7]`, a bare real such as `1.5`, or the textual
    /// literal `a0 + a1 e1 + ... + a7 e7` (a space separates a coefficient
    /// from its unit; repeated units accumulate).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty octonion literal".into()));
        }
        if t.starts_with('[') {
            return parse_array(t);
        }
        if let Ok(x) = t.parse::<f64>() {
            return Ok(Octonion::real(x));
        }
        parse_textual(t)
    }
}

fn parse_array(t: &str) -> Result<Octonion> {
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("unterminated array literal {t:?}")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 8 {
        return Err(Error::Parse(format!(
            "array literal needs 8 coordinates, got {}",
            parts.len()
        )));
    }
    let mut c = [0.0; 8];
    for (slot, p) in c.iter_mut().zip(parts) {
        *slot = p
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad coordinate {p:?}")))?;
    }
    Ok(Octonion(c))
}

/// Splits `t` at top-level `+`/`-` signs, skipping signs that belong to a
/// float exponent (`1e-3`).
fn split_terms(t: &str) -> Vec<String> {
    let chars: Vec<char> = t.chars().collect();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, &ch) in chars.iter().enumerate() {
        let is_exponent_sign = i >= 2
            && matches!(chars[i - 1], 'e' | 'E')
            && (chars[i - 2].is_ascii_digit() || chars[i - 2] == '.');
        if (ch == '+' || ch == '-') && !is_exponent_sign && !cur.trim().is_empty() {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        terms.push(cur);
    }
    terms
}

fn parse_unit(tok: &str) -> Option<usize> {
    let rest = tok.strip_prefix('e')?;
    match rest.parse::<usize>() {
        Ok(k) if (1..=7).contains(&k) => Some(k),
        _ => None,
    }
}

fn parse_textual(t: &str) -> Result<Octonion> {
    let mut c = [0.0; 8];
    for term in split_terms(t) {
        let compact: String = term.split_whitespace().collect::<Vec<_>>().join(" ");
        let (sign, body) = match compact.strip_prefix('-') {
            Some(r) => (-1.0, r.trim()),
            None => (1.0, compact.strip_prefix('+').unwrap_or(&compact).trim()),
        };
        let toks: Vec<&str> = body.split([' ', '*']).filter(|x| !x.is_empty()).collect();
        let bad = || Error::Parse(format!("bad octonion term {term:?}"));
        match toks.as_slice() {
            [unit] if parse_unit(unit).is_some() => {
                c[parse_unit(unit).unwrap()] += sign;
            }
            [num] => {
                c[0] += sign * num.parse::<f64>().map_err(|_| bad())?;
            }
            [num, unit] => {
                let k = parse_unit(unit).ok_or_else(bad)?;
                c[k] += sign * num.parse::<f64>().map_err(|_| bad())?;
            }
            _ => return Err(bad()),
        }
    }
    Ok(Octonion(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Octonion {
        Octonion::basis(i)
    }

    #[test]
    fn table_entries() {
        assert_eq!(e(1) * e(2), e(4));
        assert_eq!(e(6) * e(7), -e(1));
        assert_eq!(e(1) * e(3), e(5));
        assert_eq!(e(2) * e(3), e(6));
        assert_eq!((e(1) * e(2)) * e(3), e(7));
        let a = Octonion::new([1.0, -2.0, 3.0, 0.5, 0.0, 7.0, -1.0, 2.0]);
        assert_eq!(Octonion::ONE * a, a);
        assert_eq!(a * Octonion::ONE, a);
    }

    #[test]
    fn units_square_to_minus_one_and_anticommute() {
        for i in 1..8 {
            assert_eq!(e(i) * e(i), -Octonion::ONE);
            for j in 1..8 {
                if i != j {
                    assert_eq!(e(i) * e(j), -(e(j) * e(i)), "e{i} e{j}");
                }
            }
        }
    }

    #[test]
    fn cayley_dickson_matches_table_on_units() {
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(e(i).mul_cayley_dickson(&e(j)), e(i) * e(j));
            }
        }
        assert_eq!(Octonion::ONE.mul_cayley_dickson(&Octonion::ONE), Octonion::ONE);
    }

    #[test]
    fn correspondence_is_a_signed_permutation() {
        let c = correspondence();
        let mut seen = c.index;
        seen.sort_unstable();
        assert_eq!(seen, [0, 1, 2, 3, 4, 5, 6, 7]);
        assert!(c.sign.iter().all(|s| s.abs() == 1.0));
        // e3 is the second quaternion slot's real unit
        assert_eq!((c.index[3], c.sign[3]), (4, 1.0));
    }

    #[test]
    fn conj_and_inverse() {
        assert_eq!(e(1).conj(), -e(1));
        assert_eq!(Octonion::ONE.conj(), Octonion::ONE);
        assert_eq!(e(1).inverse().unwrap(), -e(1));
        assert_eq!(Octonion::real(2.0).inverse().unwrap(), Octonion::real(0.5));
        assert!(matches!(Octonion::ZERO.inverse(), Err(Error::Domain(_))));
        assert!(matches!(
            Octonion::real(1e-151).inverse(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn associator_of_first_three_units() {
        let a = associator(&e(1), &e(2), &e(3));
        assert_eq!(a.value, e(7).scale(2.0));
        let x = Octonion::new([0.3, 1.0, -2.0, 0.0, 4.0, 0.0, 0.5, 1.5]);
        let y = Octonion::new([1.0, 0.0, 2.0, -1.0, 0.0, 3.0, 0.0, -0.5]);
        assert_eq!(associator(&Octonion::ONE, &x, &y).value, Octonion::ZERO);
    }

    #[test]
    fn dot_basics() {
        assert_eq!(e(1).dot(&e(1)), 1.0);
        assert_eq!(e(1).dot(&e(2)), 0.0);
    }

    #[test]
    fn literal_forms() {
        let a: Octonion = "[1,2,3,4,5,6,7,8]".parse().unwrap();
        assert_eq!(a.coords(), [1., 2., 3., 4., 5., 6., 7., 8.]);
        assert_eq!("1.5".parse::<Octonion>().unwrap(), Octonion::real(1.5));
        let b: Octonion = "0.3 + 0.1 e2 - 2.5e-1 e5".parse().unwrap();
        assert_eq!(b.coords(), [0.3, 0.0, 0.1, 0.0, 0.0, -0.25, 0.0, 0.0]);
        let c: Octonion = "-e1 + e7".parse().unwrap();
        assert_eq!(c, -e(1) + e(7));
        assert!("[1,2,3]".parse::<Octonion>().is_err());
        assert!("1 + 2 e9".parse::<Octonion>().is_err());
        assert!("".parse::<Octonion>().is_err());
        let d = Octonion::new([1.0, -2.0, 0.0, 1e-3, 0.0, 0.0, 0.0, 3.25]);
        assert_eq!(d.to_string().parse::<Octonion>().unwrap(), d);
    }

    #[test]
    fn json_array_form() {
        let a = Octonion::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[1.0,0.0,0.0,0.0,0.0,0.0,0.0,-1.0]");
        assert_eq!(serde_json::from_str::<Octonion>(&s).unwrap(), a);
    }
}
