//! Table-driven arithmetic in GF(p^n).
//!
//! Element `e` encodes the polynomial `Σ c_i x^i` through its base-`p`
//! digits `c_i`, so `0` is zero, `1` is one and `0..p` is the prime field.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order handled with full multiplication tables.
pub const MAX_FIELD_ORDER: u64 = 1024;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `q = p^n` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut n = 0;
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

/// Polynomial over `F_p`, coefficients low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<u64>);

impl Poly {
    fn trimmed(mut v: Vec<u64>) -> Self {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        Poly(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Remainder of `self` modulo the monic `m`.
    fn rem(&self, m: &Poly, p: u64) -> Poly {
        let mut r = self.0.clone();
        let d = m.degree();
        while r.len() > d && r.len() > 1 {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - d;
            if lead != 0 {
                for (i, &c) in m.0.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + p - lead * c % p) % p;
                }
            }
            r.pop();
        }
        Poly::trimmed(r)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Monic polynomials of the given degree, in increasing digit order.
    fn monic_of_degree(p: u64, degree: usize) -> impl Iterator<Item = Poly> {
        let count = p.pow(degree as u32);
        (0..count).map(move |mut code| {
            let mut c = Vec::with_capacity(degree + 1);
            for _ in 0..degree {
                c.push(code % p);
                code /= p;
            }
            c.push(1);
            Poly(c)
        })
    }

    pub fn is_irreducible(&self, p: u64) -> bool {
        let d = self.degree();
        d >= 1
            && (1..=d / 2).all(|k| Poly::monic_of_degree(p, k).all(|f| !self.rem(&f, p).is_zero()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Field {
    p: u64,
    degree: u32,
    q: usize,
    modulus: Poly,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl Field {
    /// GF(p^n) over the smallest irreducible monic modulus (digit order).
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) || n == 0 {
            return Err(Error::NotPrimePower(p.saturating_pow(n)));
        }
        let q = p.checked_pow(n).filter(|&q| q <= MAX_FIELD_ORDER);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge(p.saturating_pow(n)));
        };
        let modulus = Poly::monic_of_degree(p, n as usize)
            .find(|m| m.is_irreducible(p))
            .ok_or(Error::FieldTooLarge(q))?;
        Self::with_modulus(p, modulus)
    }

    pub fn of_order(q: u64) -> Result<Self> {
        let (p, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, n)
    }

    pub fn with_modulus(p: u64, modulus: Poly) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrimePower(p));
        }
        if modulus.0.last() != Some(&1) || !modulus.is_irreducible(p) {
            return Err(Error::NotIrreducible(modulus.to_string()));
        }
        let degree = modulus.degree() as u32;
        let q = p.pow(degree) as usize;
        if q as u64 > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(q as u64));
        }
        let digits = |e: usize| -> Vec<u64> {
            let mut e = e as u64;
            (0..degree)
                .map(|_| {
                    let c = e % p;
                    e /= p;
                    c
                })
                .collect()
        };
        let encode = |c: &[u64]| -> u32 { c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32 };
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum);
                let mut prod = vec![0u64; 2 * degree as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = Poly::trimmed(prod).rem(&modulus, p).0;
                r.resize(degree as usize, 0);
                mul[a * q + b] = encode(&r);
            }
        }
        Ok(Field {
            p,
            degree,
            q,
            modulus,
            add,
            mul,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap_or(0)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.pow(a, self.q as u64 - 2))
    }
}

/// `X³ − c₂X² − c₁X − c₀` over a field, coefficients as element codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cubic {
    pub c2: usize,
    pub c1: usize,
    pub c0: usize,
}

impl Cubic {
    pub fn eval(&self, field: &Field, x: usize) -> usize {
        let x2 = field.mul(x, x);
        let x3 = field.mul(x2, x);
        let t = field.add(field.add(field.mul(self.c2, x2), field.mul(self.c1, x)), self.c0);
        field.sub(x3, t)
    }

    /// A cubic is irreducible exactly when it has no root.
    pub fn is_irreducible(&self, field: &Field) -> bool {
        (0..field.order()).all(|x| self.eval(field, x) != 0)
    }

    /// Multiplication by `λ` on `aλ² + bλ + c`, written `(a, b, c)`.
    pub fn step(&self, field: &Field, v: [usize; 3]) -> [usize; 3] {
        let [a, b, c] = v;
        [
            field.add(field.mul(self.c2, a), b),
            field.add(field.mul(self.c1, a), c),
            field.mul(self.c0, a),
        ]
    }

    /// Orbit of the projective point `(0,0,1)` until it closes.
    pub fn point_orbit(&self, field: &Field) -> Vec<[usize; 3]> {
        let start = [0, 0, 1];
        let limit = field.order().pow(2) + field.order() + 1;
        let mut points = vec![start];
        let mut v = self.step(field, start);
        while !proportional(field, v, start) && points.len() <= limit {
            points.push(v);
            v = self.step(field, v);
        }
        points
    }

    pub fn describe(&self, field: &Field) -> String {
        format!("X^3-({})X^2-({})X-({}) over GF({})", self.c2, self.c1, self.c0, field.order())
    }
}

fn proportional(field: &Field, u: [usize; 3], v: [usize; 3]) -> bool {
    // u ∝ v iff all 2×2 minors vanish.
    (0..3).all(|i| {
        (i + 1..3).all(|j| field.mul(u[i], v[j]) == field.mul(u[j], v[i]))
    })
}

pub fn det3(field: &Field, a: [usize; 3], b: [usize; 3], c: [usize; 3]) -> usize {
    let m = |x, y| field.mul(x, y);
    let minor = |i: usize, j: usize| field.sub(m(b[i], c[j]), m(b[j], c[i]));
    let t0 = m(a[0], minor(1, 2));
    let t1 = m(a[1], minor(0, 2));
    let t2 = m(a[2], minor(0, 1));
    field.add(field.sub(t0, t1), t2)
}

/// First irreducible cubic in `(c₂, c₁, c₀)` order whose point orbit has length `q²+q+1`.
pub fn primitive_cubic(field: &Field) -> Result<Cubic> {
    let q = field.order();
    let target = q * q + q + 1;
    for c2 in 0..q {
        for c1 in 0..q {
            for c0 in 1..q {
                let cubic = Cubic { c2, c1, c0 };
                if cubic.is_irreducible(field) && cubic.point_orbit(field).len() == target {
                    return Ok(cubic);
                }
            }
        }
    }
    Err(Error::NotPrimitive {
        poly: format!("any cubic over GF({q})"),
        order: 0,
        expected: target,
    })
}
