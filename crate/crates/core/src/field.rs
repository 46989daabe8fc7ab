//! Exact arithmetic in small finite fields `F_{p^e}`.
//!
//! Elements are dense coefficient vectors `c0 + c1 x + ... + c_{e-1} x^{e-1}`
//! reduced modulo a fixed monic irreducible polynomial. A [`FieldElem`] packs
//! that vector into one integer whose natural order is the lexicographic order
//! of `(c0, c1, ..., c_{e-1})`, so `0..q` enumerates the field canonically.
//! The element carries no reference to its field; every operation goes
//! through the owning [`FieldSpec`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

const MAX_DEGREE: usize = 16;

/// An element of some `F_{p^e}`, stored as its canonical index.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    /// Canonical index of the element in `0..q`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients from the constant term upward (length e+1).
    modulus: Vec<u32>,
    /// `place[i] = p^(e-1-i)`, the weight of coefficient `c_i` in the index.
    place: Vec<u32>,
}

/// The field `F_{p^e}` with its fixed modulus. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.e == other.inner.e)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if self.e() > 1 {
            write!(f, "[modulus {:?}]", self.inner.modulus)?;
        }
        Ok(())
    }
}

/// Operation selector for [`FieldSpec::arith`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow,
    Cube,
}

/// Second operand of [`FieldSpec::arith`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    None,
    Elem(FieldElem),
    Exponent(u64),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic `b` over `F_p` (coefficients low to high).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (j, &bj) in b.iter().enumerate() {
            let t = (lead as u64 * bj as u64 % p as u64) as u32;
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        poly_trim(&mut r);
    }
    r
}

/// Trial factorization: no monic factor of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut m = n;
            for _ in 0..d {
                cand.push((m % p as u64) as u32);
                m /= p as u64;
            }
            cand.push(1);
            if poly_rem(poly, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds `F_{p^e}` with the lexicographically least monic irreducible
    /// modulus (coefficient tuple read from the constant term upward).
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64).checked_pow(e);
        let q = match q {
            Some(q) if q <= MAX_ORDER && (e as usize) <= MAX_DEGREE => q as u32,
            _ => return Err(Error::FieldTooLarge { p, e }),
        };
        let mut modulus = None;
        // Tuples (c0, .., c_{e-1}) in lexicographic order: c0 is the most
        // significant digit of n.
        for n in 0..q {
            let mut digits = vec![0u32; e as usize];
            let mut m = n;
            for i in (0..e as usize).rev() {
                digits[i] = m % p;
                m /= p;
            }
            let mut cand = digits;
            cand.push(1);
            if is_irreducible(&cand, p) {
                modulus = Some(cand);
                break;
            }
        }
        let modulus = modulus.ok_or(Error::NoIrreducible { p, e })?;
        let place = (0..e).map(|i| p.pow(e - 1 - i)).collect();
        Ok(FieldSpec {
            inner: Arc::new(Inner {
                p,
                e,
                q,
                modulus,
                place,
            }),
        })
    }

    /// Builds a field from `q = p^e`.
    pub fn with_order(q: u32) -> Result<Self> {
        for p in 2..=q {
            if q % p == 0 {
                let mut e = 0;
                let mut m = q;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                if m != 1 {
                    return Err(Error::InvalidInput(format!("{q} is not a prime power")));
                }
                return FieldSpec::new(p, e);
            }
        }
        Err(Error::InvalidInput(format!("{q} is not a prime power")))
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn e(&self) -> u32 {
        self.inner.e
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(self.inner.place[0])
    }

    /// Image of the integer `n` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        let p = self.inner.p as i64;
        let c = n.rem_euclid(p) as u32;
        FieldElem(c * self.inner.place[0])
    }

    /// The residue class of `x` (for `e = 1` the root of the linear modulus).
    pub fn generator(&self) -> FieldElem {
        if self.e() == 1 {
            self.from_int(-(self.inner.modulus[0] as i64))
        } else {
            FieldElem(self.inner.place[1])
        }
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.0 < self.inner.q
    }

    pub fn elem_from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.e() as usize {
            return Err(Error::FieldMismatch(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.e()
            )));
        }
        let mut idx = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p() {
                return Err(Error::FieldMismatch(format!(
                    "coefficient {c} not reduced mod {}",
                    self.p()
                )));
            }
            idx += c * self.inner.place[i];
        }
        Ok(FieldElem(idx))
    }

    /// Coefficients `(c0, .., c_{e-1})` of `a`.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let mut out = vec![0; self.e() as usize];
        self.unpack(a, &mut out);
        out
    }

    fn unpack(&self, a: FieldElem, out: &mut [u32]) {
        let p = self.inner.p;
        let mut m = a.0;
        for i in (0..self.e() as usize).rev() {
            out[i] = m % p;
            m /= p;
        }
    }

    fn pack(&self, c: &[u32]) -> FieldElem {
        let p = self.inner.p;
        let mut idx = 0;
        for &ci in c.iter().take(self.e() as usize) {
            idx = idx * p + ci;
        }
        FieldElem(idx)
    }

    /// All `q` elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q()).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.inner.p;
        if self.inner.e == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut r, mut place) = (a.0, b.0, 0, 1);
        for _ in 0..self.inner.e {
            r += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElem(r)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.inner.p;
        if self.inner.e == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut r, mut place) = (a.0, 0, 1);
        for _ in 0..self.inner.e {
            r += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        FieldElem(r)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.inner.p as u64;
        if self.inner.e == 1 {
            return FieldElem((a.0 as u64 * b.0 as u64 % p) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let e = self.inner.e as usize;
        let mut ca = [0u32; MAX_DEGREE];
        let mut cb = [0u32; MAX_DEGREE];
        self.unpack(a, &mut ca[..e]);
        self.unpack(b, &mut cb[..e]);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if ca[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] += ca[i] as u64 * cb[j] as u64;
            }
        }
        for v in prod.iter_mut().take(2 * e - 1) {
            *v %= p;
        }
        // x^e = -(m_0 + m_1 x + ... + m_{e-1} x^{e-1})
        let m = &self.inner.modulus;
        for k in (e..2 * e - 1).rev() {
            let t = prod[k] % p;
            if t == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &mj) in m.iter().enumerate().take(e) {
                prod[k - e + j] = (prod[k - e + j] + (p - t) * mj as u64) % p;
            }
        }
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..e {
            out[i] = (prod[i] % p) as u32;
        }
        self.pack(&out[..e])
    }

    pub fn pow(&self, a: FieldElem, mut n: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn cube(&self, a: FieldElem) -> FieldElem {
        self.mul(self.mul(a, a), a)
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q() as u64 - 2))
    }

    /// Checked entry point mirroring the arithmetic operations one by one.
    pub fn arith(&self, op: ArithOp, a: FieldElem, b: Operand) -> Result<FieldElem> {
        let check = |x: FieldElem| {
            if self.contains(x) {
                Ok(x)
            } else {
                Err(Error::FieldMismatch(format!(
                    "element index {} outside F_{}",
                    x.0,
                    self.q()
                )))
            }
        };
        let a = check(a)?;
        let other = || match b {
            Operand::Elem(x) => check(x),
            _ => Err(Error::InvalidInput(format!("{op:?} needs a field element"))),
        };
        match op {
            ArithOp::Add => Ok(self.add(a, other()?)),
            ArithOp::Sub => Ok(self.sub(a, other()?)),
            ArithOp::Mul => Ok(self.mul(a, other()?)),
            ArithOp::Inv => self.inv(a),
            ArithOp::Cube => Ok(self.cube(a)),
            ArithOp::Pow => match b {
                Operand::Exponent(n) => Ok(self.pow(a, n)),
                _ => Err(Error::InvalidInput("pow needs an exponent".into())),
            },
        }
    }

    /// Deterministic embedding into `target` (see [`Embedding`]).
    pub fn embedding_into(&self, target: &FieldSpec) -> Result<Embedding> {
        Embedding::new(self, target)
    }

    /// Whether `self` embeds into `target`.
    pub fn divides(&self, target: &FieldSpec) -> bool {
        self.p() == target.p() && target.e() % self.e() == 0
    }
}

/// Ring embedding `F_{p^e} -> F_{p^{em}}` sending the residue of `x` to the
/// least root (canonical order) of the source modulus in the target.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldSpec,
    target: FieldSpec,
    images: Vec<FieldElem>,
    preimages: HashMap<FieldElem, FieldElem>,
}

impl Embedding {
    pub fn new(source: &FieldSpec, target: &FieldSpec) -> Result<Self> {
        if !source.divides(target) {
            return Err(Error::IncompatibleEmbedding {
                src: source.q(),
                dst: target.q(),
            });
        }
        let root = if source.e() == 1 {
            None
        } else {
            let m: Vec<FieldElem> = source
                .modulus()
                .iter()
                .map(|&c| target.from_int(c as i64))
                .collect();
            let root = target.elements().find(|&r| {
                let mut acc = target.zero();
                for &c in m.iter().rev() {
                    acc = target.add(target.mul(acc, r), c);
                }
                acc.is_zero()
            });
            Some(root.ok_or(Error::IncompatibleEmbedding {
                src: source.q(),
                dst: target.q(),
            })?)
        };
        let images: Vec<FieldElem> = source
            .elements()
            .map(|a| {
                let c = source.coeffs(a);
                match root {
                    None => target.from_int(c[0] as i64),
                    Some(r) => {
                        let mut acc = target.zero();
                        for &ci in c.iter().rev() {
                            acc = target.add(target.mul(acc, r), target.from_int(ci as i64));
                        }
                        acc
                    }
                }
            })
            .collect();
        let preimages = images
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, FieldElem(i as u32)))
            .collect();
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            images,
            preimages,
        })
    }

    pub fn source(&self) -> &FieldSpec {
        &self.source
    }

    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    pub fn apply(&self, a: FieldElem) -> FieldElem {
        self.images[a.0 as usize]
    }

    /// The source element mapping to `b`, if `b` lies in the image.
    pub fn preimage(&self, b: FieldElem) -> Option<FieldElem> {
        self.preimages.get(&b).copied()
    }
}

/// Serialized form `{"p": .., "e": ..}`.
#[derive(Serialize, Deserialize)]
struct FieldRepr {
    p: u32,
    e: u32,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr {
            p: self.p(),
            e: self.e(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FieldRepr::deserialize(d)?;
        FieldSpec::new(r.p, r.e).map_err(serde::de::Error::custom)
    }
}
