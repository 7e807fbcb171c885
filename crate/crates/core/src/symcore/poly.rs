//! Sparse polynomials in `a_1..a_n` and `x` with integer coefficients.
//!
//! A monomial is packed into a `u128`: byte 15 holds the total degree, byte
//! 14 the exponent of `x`, and byte `j - 1` the exponent of `a_j`. Comparing
//! the packed keys as integers is then degree-lex order with
//! `a_1 < a_2 < ... < a_n < x`, and multiplying monomials is adding keys.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::gfield::FieldSpec;

/// Number of `a` variables a monomial key can hold.
pub const MAX_VARS: usize = 14;
const MAX_EXP: u32 = 255;
const X_SHIFT: u32 = 112;
const DEG_SHIFT: u32 = 120;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    fn byte(self, shift: u32) -> u32 {
        ((self.0 >> shift) & 0xff) as u32
    }

    pub fn degree(self) -> u32 {
        self.byte(DEG_SHIFT)
    }

    pub fn x_exp(self) -> u32 {
        self.byte(X_SHIFT)
    }

    /// Exponent of `a_j`, 1-based.
    pub fn a_exp(self, j: usize) -> u32 {
        self.byte(8 * (j as u32 - 1))
    }

    pub fn a_degree(self) -> u32 {
        self.degree() - self.x_exp()
    }

    fn from_parts(a: &[u32], x: u32) -> Monomial {
        assert!(a.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let total: u32 = a.iter().sum::<u32>() + x;
        assert!(total <= MAX_EXP, "monomial degree above {MAX_EXP}");
        let mut key = (total as u128) << DEG_SHIFT | (x as u128) << X_SHIFT;
        for (j, &e) in a.iter().enumerate() {
            key |= (e as u128) << (8 * j);
        }
        Monomial(key)
    }

    fn mul(self, other: Monomial) -> Monomial {
        assert!(self.degree() + other.degree() <= MAX_EXP, "monomial degree above {MAX_EXP}");
        Monomial(self.0 + other.0)
    }

    fn divides(self, other: Monomial) -> bool {
        (0..16).all(|b| self.byte(8 * b) <= other.byte(8 * b))
    }

    fn div(self, other: Monomial) -> Monomial {
        Monomial(self.0 - other.0)
    }

    fn without_x(self) -> Monomial {
        let x = self.x_exp() as u128;
        Monomial(self.0 - (x << X_SHIFT) - (x << DEG_SHIFT))
    }

    fn exponents(self, nvars: usize) -> Vec<u32> {
        (1..=nvars).map(|j| self.a_exp(j)).collect()
    }
}

/// Canonical form: no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl FormalPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::ONE, c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `a_j`, 1-based.
    pub fn a(nvars: usize, j: usize) -> Self {
        assert!((1..=nvars).contains(&j), "a_{j} out of range");
        let mut e = vec![0; nvars];
        e[j - 1] = 1;
        Self::monomial(nvars, &e, 0, 1)
    }

    pub fn x(nvars: usize) -> Self {
        Self::monomial(nvars, &vec![0; nvars], 1, 1)
    }

    /// `x - a_j`
    pub fn linear_factor(nvars: usize, j: usize) -> Self {
        Self::x(nvars).sub(&Self::a(nvars, j))
    }

    pub fn monomial(nvars: usize, a_exps: &[u32], x_exp: u32, c: impl Into<BigInt>) -> Self {
        assert_eq!(a_exps.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::from_parts(a_exps, x_exp), c.into());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(Monomial, &BigInt)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Degree in `x`; `None` for the zero polynomial.
    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x_exp()).max()
    }

    /// Largest total degree in the `a` variables.
    pub fn degree_a(&self) -> u32 {
        self.terms.keys().map(|m| m.a_degree()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Coefficient of `x^e`, a polynomial in the `a` variables only.
    pub fn coeff_x(&self, e: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.x_exp() == e {
                out.terms.insert(m.without_x(), c.clone());
            }
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`
    /// in `Z[a, x]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check_vars(d);
        let (dm, dc) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let (qc, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let qm = rm.div(dm);
            for (m, c) in &d.terms {
                rem.add_term(m.mul(qm), -(c * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Gcd of the integer coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| {
                    let (q, r) = v.div_rem(c);
                    debug_assert!(r.is_zero());
                    (*m, q)
                })
                .collect(),
        }
    }

    /// Sign of the leading coefficient.
    pub fn leading_is_negative(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }

    /// Substitutes `a_n := a_{n-1}` and drops `a_n`.
    pub fn merge_last_two(&self) -> Self {
        assert!(self.nvars >= 2, "need at least two variables");
        let n = self.nvars;
        let mut out = Self::zero(n - 1);
        for (m, c) in &self.terms {
            let mut e = m.exponents(n);
            let last = e.pop().unwrap();
            e[n - 2] += last;
            out.add_term(Monomial::from_parts(&e, m.x_exp()), c.clone());
        }
        out
    }

    /// Re-embeds into a ring with `nvars >= self.nvars` variables.
    pub fn widen(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        Self { nvars, terms: self.terms.clone() }
    }

    /// Substitutes `a_j := point[j-1]` in GF(q) and returns the coefficients
    /// of the result in `x`, lowest degree first. Integer coefficients are
    /// mapped through the prime subfield.
    pub fn eval_a(&self, field: &FieldSpec, point: &[u32]) -> Vec<u32> {
        assert_eq!(point.len(), self.nvars);
        let p = BigInt::from(field.characteristic());
        let len = self.degree_x().map_or(0, |d| d as usize + 1);
        let mut out = vec![0u32; len];
        for (m, c) in &self.terms {
            let cr = c.mod_floor(&p);
            let mut v = cr.to_u32_digits().1.first().copied().unwrap_or(0);
            if v == 0 {
                continue;
            }
            for (j, &aj) in point.iter().enumerate() {
                let e = m.a_exp(j + 1);
                if e > 0 {
                    v = field.mul(v, field.pow(aj, e as u64));
                }
            }
            let slot = &mut out[m.x_exp() as usize];
            *slot = field.add(*slot, v);
        }
        out
    }

    /// Integer value at an integer point (all variables including `x`).
    pub fn eval_int(&self, a: &[i64], x: i64) -> BigInt {
        assert_eq!(a.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.clone();
                for (j, &aj) in a.iter().enumerate() {
                    v *= BigInt::from(aj).pow(m.a_exp(j + 1));
                }
                v * BigInt::from(x).pow(m.x_exp())
            })
            .sum()
    }
}

impl fmt::Display for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut vars = Vec::new();
            if m.x_exp() > 0 {
                vars.push(power("x", m.x_exp()));
            }
            for j in (1..=self.nvars).rev() {
                if m.a_exp(j) > 0 {
                    vars.push(power(&format!("a{j}"), m.a_exp(j)));
                }
            }
            let mag = c.abs();
            let body = match (vars.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{mag}*{}", vars.join("*")),
            };
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

fn power(var: &str, e: u32) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

impl fmt::Debug for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalPoly({self})")
    }
}

impl Serialize for FormalPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
