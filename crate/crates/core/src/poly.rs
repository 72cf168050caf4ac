//! Exact univariate polynomial arithmetic over the rationals and over prime
//! fields F_p (p < 2^16).
//!
//! Both supported fields are perfect, so "product of distinct irreducibles"
//! coincides with square-freeness and is decided by a gcd. Factorization is
//! complete over F_p (trial division against sieved irreducibles) and partial
//! over the rationals (rational roots plus irreducibility of a remainder of
//! degree at most 3); anything beyond that is an explicit error, never a
//! guess.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FieldSpec {
    Rationals,
    Prime(u16),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if !(2..1 << 16).contains(&p) || !is_prime_u64(p) {
            return Err(Error::BadCharacteristic(p));
        }
        Ok(FieldSpec::Prime(p as u16))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p as u64,
        }
    }

    pub fn zero(&self) -> Coef {
        match self {
            FieldSpec::Rationals => Coef::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Coef::Mod(0),
        }
    }

    pub fn one(&self) -> Coef {
        match self {
            FieldSpec::Rationals => Coef::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Coef::Mod(1),
        }
    }

    pub fn integer(&self, n: i64) -> Coef {
        match self {
            FieldSpec::Rationals => Coef::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let p = *p as i64;
                Coef::Mod(n.rem_euclid(p) as u64)
            }
        }
    }

    pub fn is_zero(&self, c: &Coef) -> bool {
        match c {
            Coef::Rat(r) => r.is_zero(),
            Coef::Mod(m) => *m == 0,
        }
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (FieldSpec::Rationals, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x + y),
            (FieldSpec::Prime(p), Coef::Mod(x), Coef::Mod(y)) => Coef::Mod((x + y) % *p as u64),
            _ => panic!("coefficient does not belong to the field"),
        }
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (FieldSpec::Rationals, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x * y),
            (FieldSpec::Prime(p), Coef::Mod(x), Coef::Mod(y)) => Coef::Mod((x * y) % *p as u64),
            _ => panic!("coefficient does not belong to the field"),
        }
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        match (self, a) {
            (FieldSpec::Rationals, Coef::Rat(x)) => Coef::Rat(-x),
            (FieldSpec::Prime(p), Coef::Mod(x)) => {
                let p = *p as u64;
                Coef::Mod((p - x % p) % p)
            }
            _ => panic!("coefficient does not belong to the field"),
        }
    }

    pub fn inv(&self, a: &Coef) -> Coef {
        match (self, a) {
            (FieldSpec::Rationals, Coef::Rat(x)) => {
                assert!(!x.is_zero(), "division by zero");
                Coef::Rat(x.recip())
            }
            (FieldSpec::Prime(p), Coef::Mod(x)) => {
                assert!(*x != 0, "division by zero");
                Coef::Mod(pow_mod(*x, *p as u64 - 2, *p as u64))
            }
            _ => panic!("coefficient does not belong to the field"),
        }
    }

    pub fn div(&self, a: &Coef, b: &Coef) -> Coef {
        self.mul(a, &self.inv(b))
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// A field element; rationals are kept reduced, F_p values in 0..p.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Coef {
    Rat(BigRational),
    Mod(u64),
}

impl Coef {
    fn is_negative(&self) -> bool {
        matches!(self, Coef::Rat(r) if r.is_negative())
    }

    fn magnitude_string(&self) -> String {
        match self {
            Coef::Rat(r) => {
                let r = r.abs();
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Coef::Mod(m) => m.to_string(),
        }
    }

    fn is_one_magnitude(&self) -> bool {
        match self {
            Coef::Rat(r) => r.abs().is_one(),
            Coef::Mod(m) => *m == 1,
        }
    }
}

/// Dense polynomial, coefficients low-to-high, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Coef>,
}

impl Poly {
    pub fn from_coeffs(field: FieldSpec, mut coeffs: Vec<Coef>) -> Poly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_integers(field: FieldSpec, ints: &[i64]) -> Poly {
        Poly::from_coeffs(field, ints.iter().map(|&n| field.integer(n)).collect())
    }

    pub fn zero(field: FieldSpec) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Poly {
        Poly::from_coeffs(field, vec![field.one()])
    }

    pub fn x(field: FieldSpec) -> Poly {
        Poly::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Coef {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Coef {
        self.coeff(0)
    }

    pub fn leading(&self) -> Coef {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == self.field.one()
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.field.add(&self.coeff(i), &rhs.coeff(i)))
            .collect();
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let prod = self.field.mul(a, b);
                coeffs[i + j] = self.field.add(&coeffs[i + j], &prod);
            }
        }
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn mul_coef(&self, c: &Coef) -> Poly {
        let coeffs = self.coeffs.iter().map(|a| self.field.mul(a, c)).collect();
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert_eq!(self.field, divisor.field, "field mismatch");
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let f = self.field;
        let dd = divisor.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(f), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let lead_inv = f.inv(&divisor.leading());
        let mut quot = vec![f.zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = rem.get(k + dd).cloned().unwrap_or_else(|| f.zero());
            if f.is_zero(&top) {
                continue;
            }
            let q = f.mul(&top, &lead_inv);
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let sub = f.mul(&q, dc);
                rem[k + i] = f.sub(&rem[k + i], &sub);
            }
            quot[k] = q;
        }
        (Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.leading());
        self.mul_coef(&inv)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let scale = self.field.integer(i as i64);
                self.field.mul(c, &scale)
            })
            .collect();
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn eval(&self, at: &Coef) -> Coef {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, at), c);
        }
        acc
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        assert_eq!(a.field, b.field, "field mismatch");
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        Ok(x.monic())
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Result<Poly> {
        let g = Poly::gcd(a, b)?;
        if a.is_zero() || b.is_zero() {
            return Ok(Poly::zero(a.field));
        }
        Ok(a.mul(b).div_rem(&g).0.monic())
    }

    /// True when no irreducible factor repeats. Over F_p a vanishing
    /// derivative means the polynomial is a p-th power, hence never
    /// square-free unless constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(Poly::gcd(self, &d)?.is_constant())
    }

    /// Monic irreducible factors with multiplicity; their product equals the
    /// input up to its leading coefficient. Complete over F_p; over the
    /// rationals, rational roots are stripped and a remainder of degree 2 or
    /// 3 without roots is irreducible, while degree 4 and up is refused.
    pub fn irreducible_factors(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Vec::new());
        }
        let mut factors = match self.field {
            FieldSpec::Prime(_) => self.factor_prime_field()?,
            FieldSpec::Rationals => self.factor_rationals()?,
        };
        factors.sort_by(|(a, _), (b, _)| a.coeffs.len().cmp(&b.coeffs.len()).then(a.cmp(b)));
        Ok(factors)
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        if self.is_constant() {
            return Ok(false);
        }
        let fs = self.irreducible_factors()?;
        Ok(fs.len() == 1 && fs[0].1 == 1)
    }

    fn factor_prime_field(&self) -> Result<Vec<(Poly, u32)>> {
        let mut rem = self.monic();
        let mut out: Vec<(Poly, u32)> = Vec::new();
        let half = self.degree() / 2;
        for q in irreducibles_up_to(self.field, half)? {
            if 2 * q.degree() > rem.degree() {
                break;
            }
            let mut mult = 0u32;
            loop {
                let (quot, r) = rem.div_rem(&q);
                if r.is_zero() {
                    rem = quot;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                out.push((q, mult));
            }
            if rem.is_constant() {
                break;
            }
        }
        if !rem.is_constant() {
            out.push((rem, 1));
        }
        Ok(out)
    }

    fn factor_rationals(&self) -> Result<Vec<(Poly, u32)>> {
        let f = self.field;
        let mut rem = self.monic();
        let mut out: Vec<(Poly, u32)> = Vec::new();
        // Powers of x.
        let mut x_mult = 0u32;
        while !rem.is_constant() && f.is_zero(&rem.constant_term()) {
            rem = rem.div_rem(&Poly::x(f)).0;
            x_mult += 1;
        }
        if x_mult > 0 {
            out.push((Poly::x(f), x_mult));
        }
        for root in rem.rational_roots()? {
            let lin = Poly::from_coeffs(f, vec![f.neg(&Coef::Rat(root.clone())), f.one()]);
            let mut mult = 0u32;
            loop {
                let (quot, r) = rem.div_rem(&lin);
                if r.is_zero() {
                    rem = quot;
                    mult += 1;
                } else {
                    break;
                }
            }
            debug_assert!(mult > 0);
            out.push((lin, mult));
        }
        match rem.degree() {
            0 => {}
            2 | 3 => out.push((rem, 1)),
            d => return Err(Error::UnsupportedFactorization { degree: d }),
        }
        Ok(out)
    }

    /// All rational roots of a nonzero rational polynomial with nonzero
    /// constant term, each listed once.
    fn rational_roots(&self) -> Result<Vec<BigRational>> {
        if self.is_constant() {
            return Ok(Vec::new());
        }
        // Clear denominators to an integer polynomial.
        let mut denom_lcm = BigInt::one();
        for c in &self.coeffs {
            if let Coef::Rat(r) = c {
                let d = r.denom();
                denom_lcm = &denom_lcm / gcd_bigint(&denom_lcm, d) * d;
            }
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| match c {
                Coef::Rat(r) => r.numer() * (&denom_lcm / r.denom()),
                Coef::Mod(_) => unreachable!(),
            })
            .collect();
        let a0 = ints.first().cloned().unwrap_or_else(BigInt::zero);
        let an = ints.last().cloned().unwrap_or_else(BigInt::zero);
        debug_assert!(!a0.is_zero() && !an.is_zero());
        let p_divs = small_divisors(&a0)?;
        let q_divs = small_divisors(&an)?;
        let mut roots = Vec::new();
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                    if roots.contains(&cand) {
                        continue;
                    }
                    if self.field.is_zero(&self.eval(&Coef::Rat(cand.clone()))) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }
}

fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.abs(), b.abs());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

fn small_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let n: u64 = n
        .abs()
        .try_into()
        .ok()
        .filter(|&v: &u64| v <= 1_000_000_000_000)
        .ok_or_else(|| {
            Error::Unsupported("coefficient too large for rational root search".into())
        })?;
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// All monic polynomials of exactly the given degree over a prime field,
/// ordered lexicographically by coefficient vector.
pub fn monic_polys(field: FieldSpec, degree: usize) -> Result<Vec<Poly>> {
    let p = match field {
        FieldSpec::Prime(p) => p as u64,
        FieldSpec::Rationals => {
            return Err(Error::Unsupported(
                "polynomial enumeration needs a finite field".into(),
            ))
        }
    };
    let count = p.pow(degree as u32);
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut rest = idx;
        for _ in 0..degree {
            coeffs.push(Coef::Mod(rest % p));
            rest /= p;
        }
        coeffs.push(Coef::Mod(1));
        out.push(Poly::from_coeffs(field, coeffs));
    }
    out.sort();
    Ok(out)
}

/// Monic irreducibles of degree 1..=max_degree over a prime field, sieved by
/// trial division against the smaller ones.
pub fn irreducibles_up_to(field: FieldSpec, max_degree: usize) -> Result<Vec<Poly>> {
    let mut irr: Vec<Poly> = Vec::new();
    for d in 1..=max_degree {
        for cand in monic_polys(field, d)? {
            let ok = irr
                .iter()
                .take_while(|q| 2 * q.degree() <= d)
                .all(|q| !q.divides(&cand));
            if ok {
                irr.push(cand);
            }
        }
    }
    irr.sort_by(|a, b| a.coeffs.len().cmp(&b.coeffs.len()).then(a.cmp(b)));
    Ok(irr)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if self.field.is_zero(c) {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let show_coef = i == 0 || !c.is_one_magnitude();
            if show_coef {
                write!(f, "{}", c.magnitude_string())?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// x^shift * poly, with poly having a nonzero constant term. In the Laurent
/// ring x^shift is a unit, so poly alone generates the same ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentNormalForm {
    pub shift: i64,
    pub poly: Poly,
}

/// Normalize a finitely supported exponent-to-coefficient map: factor out the
/// least exponent carrying a nonzero coefficient.
pub fn normalize_laurent(
    field: FieldSpec,
    coeffs: &BTreeMap<i64, Coef>,
) -> Result<LaurentNormalForm> {
    let support: Vec<(&i64, &Coef)> = coeffs.iter().filter(|(_, c)| !field.is_zero(c)).collect();
    let (&lo, _) = *support.first().ok_or(Error::ZeroPolynomial)?;
    let (&hi, _) = *support.last().unwrap();
    let mut vec = vec![field.zero(); (hi - lo) as usize + 1];
    for (&e, c) in support {
        vec[(e - lo) as usize] = c.clone();
    }
    Ok(LaurentNormalForm {
        shift: lo,
        poly: Poly::from_coeffs(field, vec),
    })
}

/// Parse a Laurent polynomial literal (negative exponents allowed) and
/// normalize it.
pub fn parse_laurent(field: FieldSpec, input: &str) -> Result<LaurentNormalForm> {
    let map = parse_terms(field, input, true)?;
    normalize_laurent(field, &map).map_err(|e| match e {
        Error::ZeroPolynomial => parse_err(input, "literal denotes the zero polynomial"),
        other => other,
    })
}

impl Poly {
    /// Parse an ordinary polynomial literal like "x^2+3x+1" or "1/2x-3".
    pub fn parse(field: FieldSpec, input: &str) -> Result<Poly> {
        let map = parse_terms(field, input, false)?;
        let hi = map.keys().next_back().copied().unwrap_or(0);
        let mut vec = vec![field.zero(); hi as usize + 1];
        for (e, c) in map {
            vec[e as usize] = c;
        }
        Ok(Poly::from_coeffs(field, vec))
    }
}

fn parse_err(input: &str, reason: &str) -> Error {
    Error::PolyParse {
        input: input.to_owned(),
        reason: reason.to_owned(),
    }
}

fn parse_terms(
    field: FieldSpec,
    input: &str,
    allow_negative_exponents: bool,
) -> Result<BTreeMap<i64, Coef>> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(parse_err(input, "empty literal"));
    }
    let mut map: BTreeMap<i64, Coef> = BTreeMap::new();
    let mut i = 0;
    let mut first = true;
    while i < chars.len() {
        let neg = match chars[i] {
            '+' => {
                i += 1;
                false
            }
            '-' => {
                i += 1;
                true
            }
            _ if first => false,
            _ => return Err(parse_err(input, "expected '+' or '-' between terms")),
        };
        first = false;
        let mut coef: Option<Coef> = None;
        if i < chars.len() && chars[i].is_ascii_digit() {
            let num = read_digits(&chars, &mut i);
            if i < chars.len() && chars[i] == '/' {
                i += 1;
                if i >= chars.len() || !chars[i].is_ascii_digit() {
                    return Err(parse_err(input, "expected denominator digits after '/'"));
                }
                let den = read_digits(&chars, &mut i);
                coef = Some(make_ratio(field, &num, &den, input)?);
            } else {
                coef = Some(make_ratio(field, &num, "1", input)?);
            }
        }
        if i < chars.len() && chars[i] == '*' {
            i += 1;
            if coef.is_none() {
                return Err(parse_err(input, "'*' must follow a coefficient"));
            }
        }
        let mut exp: Option<i64> = None;
        if i < chars.len() && chars[i] == 'x' {
            i += 1;
            let mut e = 1i64;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let mut exp_neg = false;
                if i < chars.len() && chars[i] == '-' {
                    if !allow_negative_exponents {
                        return Err(parse_err(input, "negative exponent not allowed here"));
                    }
                    exp_neg = true;
                    i += 1;
                }
                if i >= chars.len() || !chars[i].is_ascii_digit() {
                    return Err(parse_err(input, "expected exponent digits after '^'"));
                }
                let digits = read_digits(&chars, &mut i);
                e = digits
                    .parse::<i64>()
                    .map_err(|_| parse_err(input, "exponent out of range"))?;
                if exp_neg {
                    e = -e;
                }
            }
            exp = Some(e);
        }
        if coef.is_none() && exp.is_none() {
            return Err(parse_err(input, "expected a coefficient or 'x'"));
        }
        let c = coef.unwrap_or_else(|| field.one());
        let c = if neg { field.neg(&c) } else { c };
        let e = exp.unwrap_or(0);
        let entry = map.entry(e).or_insert_with(|| field.zero());
        *entry = field.add(entry, &c);
    }
    Ok(map)
}

fn read_digits(chars: &[char], i: &mut usize) -> String {
    let start = *i;
    while *i < chars.len() && chars[*i].is_ascii_digit() {
        *i += 1;
    }
    chars[start..*i].iter().collect()
}

fn make_ratio(field: FieldSpec, num: &str, den: &str, input: &str) -> Result<Coef> {
    match field {
        FieldSpec::Rationals => {
            let n = num
                .parse::<BigInt>()
                .map_err(|_| parse_err(input, "bad numerator"))?;
            let d = den
                .parse::<BigInt>()
                .map_err(|_| parse_err(input, "bad denominator"))?;
            if d.is_zero() {
                return Err(parse_err(input, "zero denominator"));
            }
            Ok(Coef::Rat(BigRational::new(n, d)))
        }
        FieldSpec::Prime(p) => {
            let p = p as u64;
            let n = num
                .parse::<u128>()
                .map_err(|_| parse_err(input, "bad numerator"))?;
            let d = den
                .parse::<u128>()
                .map_err(|_| parse_err(input, "bad denominator"))?;
            let n = (n % p as u128) as u64;
            let d = (d % p as u128) as u64;
            if d == 0 {
                return Err(parse_err(input, "denominator vanishes in this field"));
            }
            Ok(field.div(&Coef::Mod(n), &Coef::Mod(d)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;
    const F2: FieldSpec = FieldSpec::Prime(2);

    #[test]
    fn parse_display_roundtrip() {
        for s in ["x^2+3x+1", "x-1", "x^3-x", "2x-2", "1", "x"] {
            let p = Poly::parse(Q, s).unwrap();
            assert_eq!(p.to_string(), s.replace(" ", ""));
        }
        let p = Poly::parse(F2, "x^2+x+1").unwrap();
        assert_eq!(p.to_string(), "x^2+x+1");
    }

    #[test]
    fn parse_fraction_and_star() {
        let p = Poly::parse(Q, "1/2x^2 + 3*x - 1/3").unwrap();
        assert_eq!(p.to_string(), "1/2x^2+3x-1/3");
        // 1/2 = inverse of 2 = 2 mod 3
        let p = Poly::parse(FieldSpec::prime(3).unwrap(), "1/2x").unwrap();
        assert_eq!(p.to_string(), "2x");
    }

    #[test]
    fn parse_errors() {
        assert!(Poly::parse(Q, "").is_err());
        assert!(Poly::parse(Q, "x^-1").is_err());
        assert!(Poly::parse(Q, "y+1").is_err());
        assert!(Poly::parse(Q, "1//2").is_err());
    }

    #[test]
    fn laurent_normalization_examples() {
        let nf = parse_laurent(Q, "x^-1 + 1 + x").unwrap();
        assert_eq!(nf.shift, -1);
        assert_eq!(nf.poly.to_string(), "x^2+x+1");

        let nf = parse_laurent(F2, "x^3").unwrap();
        assert_eq!(nf.shift, 3);
        assert_eq!(nf.poly.to_string(), "1");

        let nf = parse_laurent(Q, "2x^2 - 2x").unwrap();
        assert_eq!(nf.shift, 1);
        assert_eq!(nf.poly.to_string(), "2x-2");
    }

    #[test]
    fn laurent_zero_and_idempotence() {
        assert!(parse_laurent(Q, "x - x").is_err());
        let nf = parse_laurent(Q, "2x^2-2x").unwrap();
        let again = normalize_laurent(
            Q,
            &nf.poly
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64, c.clone()))
                .collect(),
        )
        .unwrap();
        assert_eq!(again.shift, 0);
        assert_eq!(again.poly, nf.poly);
    }

    #[test]
    fn gcd_examples() {
        let a = Poly::parse(Q, "x^2-1").unwrap();
        let b = Poly::parse(Q, "x-1").unwrap();
        assert_eq!(Poly::gcd(&a, &b).unwrap().to_string(), "x-1");

        let f = Poly::parse(Q, "2x-2").unwrap();
        assert_eq!(Poly::gcd(&f, &Poly::zero(Q)).unwrap().to_string(), "x-1");

        let a = Poly::parse(F2, "x^2+x+1").unwrap();
        let b = Poly::parse(F2, "x+1").unwrap();
        assert_eq!(Poly::gcd(&a, &b).unwrap().to_string(), "1");

        assert!(Poly::gcd(&Poly::zero(Q), &Poly::zero(Q)).is_err());
    }

    #[test]
    fn squarefree_examples() {
        let sq = Poly::parse(Q, "x-1").unwrap().pow(2);
        assert!(!sq.is_squarefree().unwrap());

        let p = Poly::parse(Q, "x^2-3x+2").unwrap(); // (x-1)(x-2)
        assert!(p.is_squarefree().unwrap());

        let p = Poly::parse(F2, "x^2+1").unwrap(); // (x+1)^2
        assert!(!p.is_squarefree().unwrap());

        // Derivative vanishes in characteristic 2.
        assert!(Poly::parse(F2, "x^2+1").unwrap().derivative().is_zero());
    }

    #[test]
    fn factor_examples() {
        let p = Poly::parse(F2, "x^2+x+1").unwrap();
        let fs = p.irreducible_factors().unwrap();
        assert_eq!(fs, vec![(p.clone(), 1)]);

        let p = Poly::parse(Q, "x^3-x").unwrap();
        let fs = p.irreducible_factors().unwrap();
        let shown: Vec<(String, u32)> = fs.iter().map(|(q, m)| (q.to_string(), *m)).collect();
        // Sorted by (degree, coefficient vector): constant terms -1 < 0 < 1.
        assert_eq!(
            shown,
            vec![("x-1".into(), 1), ("x".into(), 1), ("x+1".into(), 1)]
        );

        let p = Poly::parse(Q, "x^2-2").unwrap();
        let fs = p.irreducible_factors().unwrap();
        assert_eq!(fs, vec![(p.clone(), 1)]);

        let p = Poly::parse(Q, "x^4+1").unwrap();
        assert!(matches!(
            p.irreducible_factors(),
            Err(Error::UnsupportedFactorization { degree: 4 })
        ));
    }

    #[test]
    fn factor_multiplicity_and_product() {
        let p = Poly::parse(F2, "x^2+1").unwrap(); // (x+1)^2
        let fs = p.irreducible_factors().unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0.to_string(), "x+1");
        assert_eq!(fs[0].1, 2);

        let p = Poly::parse(Q, "2x^2-6x+4").unwrap(); // 2(x-1)(x-2)
        let fs = p.irreducible_factors().unwrap();
        let mut prod = Poly::one(Q);
        for (q, m) in &fs {
            prod = prod.mul(&q.pow(*m));
        }
        assert_eq!(prod.mul_coef(&p.leading()), p);
    }

    #[test]
    fn irreducibles_over_f2() {
        let irr = irreducibles_up_to(F2, 3).unwrap();
        let shown: Vec<String> = irr.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec!["x", "x+1", "x^2+x+1", "x^3+x^2+1", "x^3+x+1"]);
    }

    #[test]
    fn derivative_zero_means_power() {
        // x^2+1 = (x+1)^2 over F_2
        let p = Poly::parse(F2, "x^2+1").unwrap();
        let sq = Poly::parse(F2, "x+1").unwrap().pow(2);
        assert_eq!(p, sq);
    }

    #[test]
    fn bad_characteristic() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(1 << 16).is_err());
        assert!(FieldSpec::prime(65521).is_ok());
    }
}
