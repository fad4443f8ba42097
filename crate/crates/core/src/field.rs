//! Arithmetic in GF(p^λ) with a polynomial-basis integer encoding.
//!
//! An element is stored as an integer in `[0, q)` whose base-`p` digits,
//! least significant first, are the coefficients `a_0, a_1, ..., a_{λ-1}`
//! of `a = Σ a_i x^i`. With this encoding the base subfield GF(p) is the
//! set of values below `p`, and for `p = 2` the masking alphabet
//! `F = {a : a_0 = 0}` is exactly the even values.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 256;

struct Inner {
    p: u32,
    degree: u32,
    order: u32,
    /// Coefficients of the monic modulus, low degree first, length `degree + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a primitive element `g`, doubled to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// Full addition table for small odd-characteristic fields.
    add_table: Option<Vec<u16>>,
}

/// A finite field GF(p^λ). Cheap to clone; all clones share the same tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.degree == other.0.degree
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}; modulus {})",
            self.0.p,
            self.0.degree,
            self.modulus_value()
        )
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn to_digits(mut value: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = value % p;
        value /= p;
    }
    out
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn trim(poly: &mut Vec<u32>) {
    while poly.len() > 1 && *poly.last().unwrap() == 0 {
        poly.pop();
    }
}

fn inv_mod_prime(a: u32, p: u32) -> u32 {
    // Fermat; p is small.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `num` modulo `den` over GF(p). `den` must be nonzero.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut rem = num.to_vec();
    let mut den = den.to_vec();
    trim(&mut den);
    let dd = den.len() - 1;
    let lead_inv = inv_mod_prime(*den.last().unwrap(), p);
    for top in (dd..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        let factor = c * lead_inv % p;
        let shift = top - dd;
        for (i, &d) in den.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + p - factor * d % p) % p;
        }
    }
    rem.truncate(dd.max(1));
    rem
}

/// Exhaustive irreducibility test: no monic factor of degree 1..=deg/2 divides `poly`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for fdeg in 1..=deg / 2 {
        let count = p.pow(fdeg as u32);
        for low in 0..count {
            let mut factor = to_digits(low, p, fdeg);
            factor.push(1);
            let rem = poly_rem(poly, &factor, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// GF(p^λ) with the default modulus: the monic primitive polynomial of
    /// degree λ with the smallest integer encoding.
    pub fn new(p: u32, degree: u32) -> Result<Field> {
        check_params(p, degree)?;
        let q = p.pow(degree);
        for value in q..2 * q {
            let modulus = to_digits(value, p, degree as usize + 1);
            if modulus[0] == 0 && degree > 1 {
                continue;
            }
            if !is_irreducible(&modulus, p) {
                continue;
            }
            if let Some(field) = Self::build(p, degree, modulus, true) {
                return Ok(field);
            }
        }
        Err(Error::InvalidField(format!(
            "no primitive polynomial found for GF({p}^{degree})"
        )))
    }

    /// GF(p^λ) with an explicit modulus given as the integer whose base-`p`
    /// digits are its coefficients (e.g. `7` for `x^2 + x + 1` over GF(2)).
    pub fn with_modulus(p: u32, degree: u32, modulus_value: u64) -> Result<Field> {
        check_params(p, degree)?;
        let mut digits = Vec::new();
        let mut v = modulus_value;
        while v > 0 {
            digits.push((v % p as u64) as u32);
            v /= p as u64;
        }
        if digits.len() != degree as usize + 1 || digits[degree as usize] != 1 {
            return Err(Error::InvalidField(format!(
                "modulus {modulus_value} is not a monic polynomial of degree {degree} over GF({p})"
            )));
        }
        if !is_irreducible(&digits, p) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus_value} is reducible over GF({p})"
            )));
        }
        Ok(Self::build(p, degree, digits, false).expect("irreducible modulus yields a field"))
    }

    /// The default field of order `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Field> {
        if q < 2 {
            return Err(Error::InvalidField(format!(
                "order {q} is not a prime power"
            )));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut degree = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            degree += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidField(format!(
                "order {q} is not a prime power"
            )));
        }
        Field::new(p, degree)
    }

    /// GF(2).
    pub fn binary() -> Field {
        Field::new(2, 1).expect("GF(2) exists")
    }

    fn build(p: u32, degree: u32, modulus: Vec<u32>, require_x_primitive: bool) -> Option<Field> {
        let q = p.pow(degree);
        let len = degree as usize;
        let mul_slow = |a: u32, b: u32| -> u32 {
            let da = to_digits(a, p, len);
            let db = to_digits(b, p, len);
            let mut prod = vec![0u32; 2 * len];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut rem = poly_rem(&prod, &modulus, p);
            rem.resize(len, 0);
            from_digits(&rem, p)
        };
        let x = if degree == 1 {
            // x reduces to -m_0 modulo x + m_0.
            (p - modulus[0]) % p
        } else {
            p
        };
        let order_of = |g: u32| -> Option<Vec<u32>> {
            if g == 0 {
                return None;
            }
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut cur = 1u32;
            for _ in 0..q - 1 {
                exp.push(cur);
                cur = mul_slow(cur, g);
                if cur == 1 && exp.len() < q as usize - 1 {
                    return None;
                }
            }
            Some(exp)
        };
        let exp = match order_of(x) {
            Some(e) => e,
            None if require_x_primitive => return None,
            None => (2..q).find_map(order_of)?,
        };
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let mut doubled = exp.clone();
        doubled.extend_from_slice(&exp);
        let mut inner = Inner {
            p,
            degree,
            order: q,
            modulus,
            exp: doubled,
            log,
            add_table: None,
        };
        if p != 2 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = digit_add(&inner, a, b) as u16;
                }
            }
            inner.add_table = Some(table);
        }
        Some(Field(Arc::new(inner)))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    /// Number of elements `q = p^λ`.
    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Modulus coefficients, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Modulus encoded as the integer with its coefficients as base-`p` digits.
    pub fn modulus_value(&self) -> u64 {
        self.0
            .modulus
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.0.p as u64 + d as u64)
    }

    /// Polynomial-basis coefficients of `a`, `a_0` first.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        to_digits(a, self.0.p, self.0.degree as usize)
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.0.order
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::ElementOutOfRange {
                value: a,
                order: self.0.order,
            })
        }
    }

    /// Wraps a raw value as a checked element.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        self.check(value)?;
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.0.p == 2 {
            a ^ b
        } else if let Some(t) = &self.0.add_table {
            t[(a * self.0.order + b) as usize] as u32
        } else {
            digit_add(&self.0, a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.0.p == 2 {
            return a;
        }
        let p = self.0.p;
        let mut out = 0;
        let mut place = 1;
        let mut v = a;
        for _ in 0..self.0.degree {
            let d = v % p;
            out += ((p - d) % p) * place;
            place *= p;
            v /= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.0.log[a as usize] + self.0.log[b as usize];
        self.0.exp[i as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.0.order - 1;
        let l = self.0.log[a as usize];
        Ok(self.0.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.order - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (e % n)) % n) as usize]
    }

    /// Embeds an integer into the prime subfield (reduced mod p).
    pub fn from_int(&self, k: u64) -> u32 {
        (k % self.0.p as u64) as u32
    }

    /// True iff `a` lies in the prime subfield, i.e. `a_1 = ... = a_{λ-1} = 0`.
    pub fn is_base_subfield(&self, a: u32) -> bool {
        a < self.0.p
    }

    /// Zeroes the constant coefficient: `Σ a_i x^i ↦ Σ_{i≥1} a_i x^i`.
    pub fn phi_project(&self, a: u32) -> Result<u32> {
        self.require_char_two()?;
        Ok(a & !1)
    }

    /// The masking alphabet `F = {a : a_0 = 0}`, ascending.
    pub fn masking_alphabet(&self) -> Result<Vec<u32>> {
        self.require_char_two()?;
        Ok((0..self.0.order).step_by(2).collect())
    }

    fn require_char_two(&self) -> Result<()> {
        if self.0.p != 2 {
            return Err(Error::NotCharacteristicTwo(self.0.p));
        }
        Ok(())
    }

    /// Serialized form: `field <p> <λ> <modulus>`.
    pub fn spec_line(&self) -> String {
        format!(
            "field {} {} {}",
            self.0.p,
            self.0.degree,
            self.modulus_value()
        )
    }

    pub fn parse_spec_line(line: &str) -> Result<Field> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::InvalidField(format!("malformed field line {line:?}"));
        if toks.len() != 4 || toks[0] != "field" {
            return Err(bad());
        }
        let p: u32 = toks[1].parse().map_err(|_| bad())?;
        let degree: u32 = toks[2].parse().map_err(|_| bad())?;
        let modulus: u64 = toks[3].parse().map_err(|_| bad())?;
        Field::with_modulus(p, degree, modulus)
    }

    /// Hamming weight of a vector over this field.
    pub fn weight(v: &[u32]) -> usize {
        v.iter().filter(|&&x| x != 0).count()
    }
}

fn check_params(p: u32, degree: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidField(format!(
            "characteristic {p} is not prime"
        )));
    }
    if degree == 0 || degree > 16 {
        return Err(Error::InvalidField(format!(
            "extension degree {degree} outside 1..=16"
        )));
    }
    match p.checked_pow(degree) {
        Some(q) if q <= MAX_ORDER => Ok(()),
        _ => Err(Error::InvalidField(format!(
            "GF({p}^{degree}) exceeds the supported order {MAX_ORDER}"
        ))),
    }
}

fn digit_add(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p;
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..inner.degree {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// A field element bound to its field, with checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.value, self.field.order())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        Ok(())
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.with(self.field.pow(self.value, e))
    }

    pub fn is_base_subfield(&self) -> bool {
        self.field.is_base_subfield(self.value)
    }

    pub fn phi_project(&self) -> Result<FieldElement> {
        Ok(self.with(self.field.phi_project(self.value)?))
    }
}
