//! Finite field GF(p^n) with trace, characters and Gauss sums.
//!
//! Elements are packed integers in `[0, q)`: the base-`p` digits of an
//! element are its polynomial coefficients, constant term first. The
//! modulus is chosen deterministically as the smallest monic irreducible
//! polynomial of degree `n` (ordering candidates by the packed value of
//! their non-leading coefficients) whose root `x` is primitive, and
//! `α = x`. Multiplication, discrete logs and powers go through full
//! exp/log tables.

mod poly;

use num_complex::Complex64;

use crate::model::root_table;
use crate::{Error, Result};

/// Largest field order accepted by [`FieldContext::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone)]
pub struct FieldContext {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, `n + 1` coefficients, constant term first.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

impl FieldContext {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::with_cap(p, n, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, n: u32, cap: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(n)
            .filter(|&q| q <= cap && q <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge {
                q: (p as u64).saturating_pow(n),
                cap,
            })?;
        let modulus = select_modulus(p, n as usize, q)
            .ok_or_else(|| Error::InvalidField(format!("no primitive modulus for p={p} n={n}")))?;

        let mut ctx = Self {
            p,
            n,
            q: q as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
        };
        ctx.fill_log_tables()?;
        ctx.fill_trace_table();
        Ok(ctx)
    }

    fn fill_log_tables(&mut self) -> Result<()> {
        let (p, n, q) = (self.p as u64, self.n as usize, self.q as usize);
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![NO_LOG; q];
        let mut digits = vec![0u64; n];
        digits[0] = 1;
        for j in 0..q - 1 {
            let packed = pack(&digits, p) as usize;
            if log[packed] != NO_LOG || packed == 0 {
                return Err(Error::InvalidField("modulus root is not primitive".into()));
            }
            log[packed] = j as u32;
            exp.push(packed as u32);
            // multiply by x and reduce by the monic modulus
            let top = digits[n - 1];
            for k in (1..n).rev() {
                digits[k] = digits[k - 1];
            }
            digits[0] = 0;
            for k in 0..n {
                let sub = top * self.modulus[k] as u64 % p;
                digits[k] = (digits[k] + p - sub) % p;
            }
        }
        if pack(&digits, p) != 1 {
            return Err(Error::InvalidField("modulus root is not primitive".into()));
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    fn fill_trace_table(&mut self) {
        let (p, n, order) = (self.p, self.n as usize, self.q as u64 - 1);
        // Tr(x^k) straight from the Frobenius sum, then linearity for the rest.
        let basis: Vec<u32> = (0..n)
            .map(|k| {
                let mut sum = 0;
                let mut e = k as u64 % order;
                for _ in 0..n {
                    sum = self.add(sum, self.exp[e as usize]);
                    e = e * p as u64 % order;
                }
                debug_assert!(sum < p, "trace left the prime field");
                sum
            })
            .collect();
        self.trace = (0..self.q)
            .map(|x| {
                let mut rest = x;
                let mut acc = 0u64;
                for b in &basis {
                    acc += (rest % p) as u64 * *b as u64;
                    rest /= p;
                }
                (acc % p as u64) as u32
            })
            .collect();
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus coefficients, constant term first (`n + 1` entries).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The designated primitive element (class of `x`).
    pub fn alpha(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    pub fn check(&self, x: u32) -> Result<()> {
        if x < self.q {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                element: x,
                q: self.q,
            })
        }
    }

    /// Coefficients of `x`, constant term first.
    pub fn digits(&self, x: u32) -> Vec<u32> {
        poly::unpack(x as u64, self.p, self.n as usize)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let (mut a, mut b, mut scale, mut out) = (a, b, 1u32, 0u32);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale = scale.wrapping_mul(p);
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.p;
        let (mut a, mut scale, mut out) = (a, 1u32, 0u32);
        while a > 0 {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale = scale.wrapping_mul(p);
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q as u64 - 1;
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order;
        self.exp[e as usize]
    }

    /// `α^j` for any `j`, reduced modulo `q − 1`.
    pub fn alpha_pow(&self, j: u64) -> u32 {
        self.exp[(j % (self.q as u64 - 1)) as usize]
    }

    /// Discrete log base `α`, in `[0, q − 2]`.
    pub fn dlog(&self, x: u32) -> Result<u32> {
        self.check(x)?;
        if x == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.log[x as usize])
    }

    /// `Tr_{q/p}(x)` as an integer in `[0, p)`.
    pub fn trace(&self, x: u32) -> u32 {
        self.trace[x as usize]
    }

    /// Exponent of `ξ_p` for the additive character `χ_a(x) = ξ_p^{Tr(a·x)}`.
    pub fn additive_char(&self, a: u32, x: u32) -> Result<u32> {
        self.check(a)?;
        self.check(x)?;
        Ok(self.trace(self.mul(a, x)))
    }

    /// Exponent of `ξ_{q−1}` for the multiplicative character
    /// `φ_i(α^j) = ξ_{q−1}^{i·j}`.
    pub fn multiplicative_char(&self, i: u32, elem: u32) -> Result<u32> {
        self.check_char_index(i)?;
        let j = self.dlog(elem)? as u64;
        Ok((i as u64 * j % (self.q as u64 - 1)) as u32)
    }

    fn check_char_index(&self, i: u32) -> Result<()> {
        if i < self.q - 1 {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "multiplicative character index {i} outside [0, {}]",
                self.q - 2
            )))
        }
    }

    /// `G(φ_i, χ_a) = Σ_{x ≠ 0} φ_i(x)·χ_a(x)`.
    pub fn gauss_sum(&self, i: u32, a: u32) -> Result<Complex64> {
        self.check_char_index(i)?;
        self.check(a)?;
        let order = self.q - 1;
        let mult_roots = root_table(order);
        let add_roots = root_table(self.p);
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..order as u64 {
            let x = self.exp[j as usize];
            let m = (i as u64 * j % order as u64) as usize;
            sum += mult_roots[m] * add_roots[self.trace(self.mul(a, x)) as usize];
        }
        Ok(sum)
    }

    /// Number of field elements with each trace value `0..p`.
    pub fn trace_distribution(&self) -> Vec<usize> {
        let mut counts = vec![0; self.p as usize];
        for &t in &self.trace {
            counts[t as usize] += 1;
        }
        counts
    }

    /// All primitive elements `α^k` with `gcd(k, q − 1) = 1`, as `(k, α^k)`.
    pub fn primitive_elements(&self) -> Vec<(u32, u32)> {
        let order = self.q - 1;
        (1..=order)
            .filter(|&k| gcd(k as u64, order as u64) == 1)
            .map(|k| (k % order, self.alpha_pow(k as u64)))
            .collect()
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pack(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn select_modulus(p: u32, n: usize, q: u64) -> Option<Vec<u32>> {
    (0..q).find_map(|packed| {
        let mut f = poly::unpack(packed, p, n);
        if f[0] == 0 {
            return None;
        }
        f.push(1);
        (poly::is_irreducible(&f, p) && poly::x_is_primitive(&f, p, q)).then_some(f)
    })
}
