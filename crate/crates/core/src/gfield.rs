//! Exact arithmetic in GF(p^m) and dense linear algebra over it.
//!
//! Elements are encoded canonically as integers in `[0, q)`: the base-p digits
//! of the encoding are the coefficients of the element as a polynomial over
//! GF(p), least significant digit first. Prime fields use direct modular
//! arithmetic, extension fields up to 2^16 elements use log/antilog tables,
//! and larger extensions fall back to polynomial arithmetic.
//!
//! Supported orders: prime fields with `p <= 2^31 - 1`, extension fields with
//! `q <= 2^20`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

/// Largest supported characteristic of a prime field.
pub const MAX_PRIME: u64 = (1 << 31) - 1;
/// Largest supported order of an extension field (m > 1).
pub const MAX_EXTENSION_ORDER: u64 = 1 << 20;
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field order {p}^{m} is outside the supported range")]
    DegreeOutOfRange { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} and {1})")]
    FieldMismatch(String, String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid field descriptor {0:?}")]
    InvalidDescriptor(String),
    #[error("value {value} is not an element of {field}")]
    InvalidElement { value: u64, field: String },
}

pub type Result<T> = std::result::Result<T, GfError>;

enum Arith {
    Prime,
    Tables { exp: Vec<u32>, log: Vec<u32> },
    Poly,
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    arith: Arith,
}

/// A finite field GF(p^m). Cheap to clone; clones share lookup tables.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `(p, m)` when `q = p^m` for a prime `p`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn decode(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    let mut digits = vec![0; m as usize];
    for d in digits.iter_mut() {
        *d = x % p;
        x /= p;
    }
    digits
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

// Polynomial helpers over GF(p), coefficient vectors low -> high.

fn poly_trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    poly_trim(&mut r);
    let dg = g.len() - 1;
    let lead_inv = inv_mod(g[dg], p) as u64;
    while r.len() > dg {
        let shift = r.len() - 1 - dg;
        let c = (*r.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        for (i, &gi) in g.iter().enumerate() {
            let sub = (c as u64 * gi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=m/2.
    for deg in 1..=m / 2 {
        let count = (p as u64).pow(deg as u32);
        for low in 0..count {
            let mut g = decode(low as u32, p, deg as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `m` over
/// GF(p), as coefficients low -> high (length m + 1, last entry 1).
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for low in 0..count {
        let mut f = decode(low as u32, p, m);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_mul_mod(a: u32, b: u32, p: u32, m: u32, modulus: &[u32]) -> u32 {
    let m = m as usize;
    let da = decode(a, p, m as u32);
    let db = decode(b, p, m as u32);
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for d in (m..2 * m - 1).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &mi) in modulus[..m].iter().enumerate() {
            let idx = d - m + i;
            prod[idx] = (prod[idx] + (p64 - c) * mi as u64) % p64;
        }
    }
    let digits: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
    encode(&digits, p)
}

impl FieldSpec {
    /// Builds GF(p^m) with the lexicographically smallest monic irreducible
    /// modulus of degree m.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(GfError::NonPrimeCharacteristic(p));
        }
        if m == 0 {
            return Err(GfError::DegreeOutOfRange { p, m });
        }
        if m == 1 {
            if p > MAX_PRIME {
                return Err(GfError::DegreeOutOfRange { p, m });
            }
            return Ok(Self::from_inner(Inner {
                p: p as u32,
                m: 1,
                q: p as u32,
                modulus: None,
                arith: Arith::Prime,
            }));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_EXTENSION_ORDER)
            .ok_or(GfError::DegreeOutOfRange { p, m })?;
        let (p32, q32) = (p as u32, q as u32);
        let modulus = smallest_irreducible(p32, m);
        let arith = if q <= TABLE_LIMIT {
            build_tables(p32, m, q32, &modulus)
        } else {
            Arith::Poly
        };
        Ok(Self::from_inner(Inner { p: p32, m, q: q32, modulus: Some(modulus), arith }))
    }

    fn from_inner(inner: Inner) -> Self {
        Self { inner: Arc::new(inner) }
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// The field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or(GfError::NonPrimeCharacteristic(q))?;
        Self::new(p, m)
    }

    /// GF(q) for the least prime power `q >= t`.
    pub fn smallest_at_least(t: u64) -> Result<Self> {
        let mut q = t.max(2);
        loop {
            if let Some((p, m)) = prime_power(q) {
                return Self::new(p, m);
            }
            if q > MAX_EXTENSION_ORDER.max(MAX_PRIME) {
                return Err(GfError::DegreeOutOfRange { p: q, m: 1 });
            }
            q += 1;
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients low -> high (monic), present iff m > 1.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.inner.modulus.as_deref()
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.order() as u64 {
            return Err(GfError::InvalidElement { value, field: self.to_string() });
        }
        Ok(FieldElement { field: self.clone(), repr: value as u32 })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), repr: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), repr: 1 }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |repr| FieldElement { field: self.clone(), repr })
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.order())
    }

    // Raw arithmetic on canonical encodings. Callers guarantee that operands
    // are valid encodings for this field.

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let f = &*self.inner;
        if f.m == 1 {
            let s = a as u64 + b as u64;
            let p = f.p as u64;
            return (if s >= p { s - p } else { s }) as u32;
        }
        if f.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..f.m {
            let d = (a % f.p + b % f.p) % f.p;
            out += d * place;
            place = place.wrapping_mul(f.p);
            a /= f.p;
            b /= f.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let f = &*self.inner;
        if a == 0 {
            return 0;
        }
        if f.m == 1 {
            return f.p - a;
        }
        if f.p == 2 {
            return a;
        }
        let mut a = a;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..f.m {
            let d = (f.p - a % f.p) % f.p;
            out += d * place;
            place = place.wrapping_mul(f.p);
            a /= f.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let f = &*self.inner;
        match &f.arith {
            Arith::Prime => (a as u64 * b as u64 % f.p as u64) as u32,
            Arith::Tables { exp, log } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize]
                }
            }
            Arith::Poly => poly_mul_mod(a, b, f.p, f.m, f.modulus.as_ref().unwrap()),
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        let f = &*self.inner;
        Ok(match &f.arith {
            Arith::Prime => inv_mod(a, f.p),
            Arith::Tables { exp, log } => exp[((f.q - 1) - log[a as usize]) as usize],
            Arith::Poly => self.pow(a, f.q as u64 - 2),
        })
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let f = &*self.inner;
        if let Arith::Tables { exp, log } = &f.arith {
            if a == 0 {
                return u32::from(e == 0);
            }
            let order = (f.q - 1) as u64;
            return exp[(log[a as usize] as u64 * (e % order) % order) as usize];
        }
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `acc + a * b`
    #[inline]
    pub fn mul_add(&self, acc: u32, a: u32, b: u32) -> u32 {
        self.add(acc, self.mul(a, b))
    }

    /// Determinant by Gaussian elimination with first-nonzero pivoting.
    pub fn det(&self, m: &Matrix) -> Result<u32> {
        if m.rows != m.cols {
            return Err(GfError::ShapeMismatch(format!(
                "determinant of a {}x{} matrix",
                m.rows, m.cols
            )));
        }
        let mut scratch = m.data.clone();
        Ok(self.det_in_place(&mut scratch, m.rows))
    }

    /// Determinant of the `n x n` row-major matrix in `a`, destroying it.
    pub fn det_in_place(&self, a: &mut [u32], n: usize) -> u32 {
        debug_assert_eq!(a.len(), n * n);
        let mut det = 1u32;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for j in col..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = self.neg(det);
            }
            let pv = a[col * n + col];
            det = self.mul(det, pv);
            let pinv = self.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let lead = a[r * n + col];
                if lead == 0 {
                    continue;
                }
                let factor = self.neg(self.mul(lead, pinv));
                for j in col..n {
                    let v = a[col * n + j];
                    if v != 0 {
                        a[r * n + j] = self.mul_add(a[r * n + j], factor, v);
                    }
                }
            }
        }
        det
    }

    pub fn rank(&self, m: &Matrix) -> usize {
        let (rows, cols) = (m.rows, m.cols);
        let mut a = m.data.clone();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
                continue;
            };
            if pivot != rank {
                for j in 0..cols {
                    a.swap(pivot * cols + j, rank * cols + j);
                }
            }
            let pinv = self.inv(a[rank * cols + col]).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let lead = a[r * cols + col];
                if lead == 0 {
                    continue;
                }
                let factor = self.neg(self.mul(lead, pinv));
                for j in col..cols {
                    let v = a[rank * cols + j];
                    if v != 0 {
                        a[r * cols + j] = self.mul_add(a[r * cols + j], factor, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn mat_mul(&self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        if a.cols != b.rows {
            return Err(GfError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let mut out = Matrix::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for t in 0..a.cols {
                let x = a.get(i, t);
                if x == 0 {
                    continue;
                }
                for j in 0..b.cols {
                    let v = self.mul_add(out.get(i, j), x, b.get(t, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn mat_inv(&self, m: &Matrix) -> Option<Matrix> {
        if m.rows != m.cols {
            return None;
        }
        let n = m.rows;
        let mut a = m.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col) != 0)?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let pinv = self.inv(a.get(col, col)).ok()?;
            for j in 0..n {
                a.set(col, j, self.mul(a.get(col, j), pinv));
                inv.set(col, j, self.mul(inv.get(col, j), pinv));
            }
            for r in 0..n {
                let lead = a.get(r, col);
                if r == col || lead == 0 {
                    continue;
                }
                let factor = self.neg(lead);
                for j in 0..n {
                    a.set(r, j, self.mul_add(a.get(r, j), factor, a.get(col, j)));
                    inv.set(r, j, self.mul_add(inv.get(r, j), factor, inv.get(col, j)));
                }
            }
        }
        Some(inv)
    }

    /// Checks that every entry is a valid encoding.
    pub fn check_matrix(&self, m: &Matrix) -> Result<()> {
        match m.data.iter().find(|&&v| v >= self.order()) {
            Some(&v) => Err(GfError::InvalidElement { value: v as u64, field: self.to_string() }),
            None => Ok(()),
        }
    }
}

fn build_tables(p: u32, m: u32, q: u32, modulus: &[u32]) -> Arith {
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    let slow_pow = |a: u32, mut e: u64| {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_mod(acc, base, p, m, modulus);
            }
            base = poly_mul_mod(base, base, p, m, modulus);
            e >>= 1;
        }
        acc
    };
    let generator = (2..q)
        .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for i in 0..order as usize {
        exp[i] = x;
        exp[i + order as usize] = x;
        log[x as usize] = i as u32;
        x = poly_mul_mod(x, generator, p, m, modulus);
    }
    Arith::Tables { exp, log }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.m == other.inner.m)
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "{}", self.inner.p)
        } else {
            write!(f, "{}^{}", self.inner.p, self.inner.m)
        }
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({self})")
    }
}

impl FromStr for FieldSpec {
    type Err = GfError;

    /// Accepts `"p"`, `"p^m"`, or a bare prime power such as `"8"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || GfError::InvalidDescriptor(s.to_string());
        let s = s.trim();
        match s.split_once('^') {
            Some((p, m)) => {
                let p: u64 = p.trim().parse().map_err(|_| bad())?;
                let m: u32 = m.trim().parse().map_err(|_| bad())?;
                Self::new(p, m)
            }
            None => {
                let q: u64 = s.parse().map_err(|_| bad())?;
                if is_prime(q) {
                    Self::new(q, 1)
                } else {
                    Self::with_order(q)
                }
            }
        }
    }
}

/// A field element tied to its field. Arithmetic operators panic when the
/// operands come from different fields; the `checked_*` methods report it.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    repr: u32,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.repr == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    fn with(&self, repr: u32) -> Self {
        Self { field: self.field.clone(), repr }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.repr, other.repr)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.repr, other.repr)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.repr, other.repr)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.field.inv(self.repr)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.field.pow(self.repr, e))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.repr, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.repr)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("field mismatch")
            }
        }

        impl<'a> $trait<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let repr = self.field.neg(self.repr);
        self.with(repr)
    }
}

/// Dense row-major matrix of canonical field encodings. The field is carried
/// separately by whoever owns the matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(GfError::ShapeMismatch(format!(
                "ragged rows: expected {cols} columns, found {}",
                bad.len()
            )));
        }
        let n_rows = rows.len();
        Ok(Self { rows: n_rows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Submatrix made of the given columns (0-based), in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// Copies the selected columns into `out` as a row-major square block.
    pub fn gather_columns(&self, cols: &[usize], out: &mut Vec<u32>) {
        out.clear();
        for i in 0..self.rows {
            let row = self.row(i);
            out.extend(cols.iter().map(|&c| row[c]));
        }
    }

    pub fn first_rows(&self, count: usize) -> Self {
        Self { rows: count, cols: self.cols, data: self.data[..count * self.cols].to_vec() }
    }
}
