//! Dense polynomials over GF(p), coefficients stored lowest degree first.

pub(crate) type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pow_mod_scalar(base: u32, mut exp: u64, p: u32) -> u32 {
    let (mut acc, mut b, p) = (1u64, base as u64 % p as u64, p as u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc as u32
}

fn inv_scalar(a: u32, p: u32) -> u32 {
    pow_mod_scalar(a, p as u64 - 2, p)
}

/// Remainder of `a` modulo `m` (`m` nonzero).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_scalar(m[dm], p) as u64;
    let mut r = trim(a.to_vec());
    let p64 = p as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p64;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = c * mi as u64 % p64;
            let cur = r[shift + i] as u64;
            r[shift + i] = ((cur + p64 - sub) % p64) as u32;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn pow_mod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Poly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = inv_scalar(lead, p) as u64;
        for c in a.iter_mut() {
            *c = (*c as u64 * inv % p as u64) as u32;
        }
    }
    a
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Irreducibility of a monic `f` of degree `n ≥ 1` over GF(p).
///
/// Degrees up to 4 use trial division by every monic polynomial of degree
/// at most `n/2`; larger degrees use Rabin's test.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    if n <= 4 {
        for d in 1..=n / 2 {
            let count = (p as u64).pow(d as u32);
            for packed in 0..count {
                let mut g = unpack(packed, p, d);
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        return true;
    }
    let x: Poly = vec![0, 1];
    // x^(p^k) mod f by repeated Frobenius.
    let frobenius = |k: usize| {
        let mut h = x.clone();
        for _ in 0..k {
            h = pow_mod(&h, p as u64, f, p);
        }
        h
    };
    if sub(&frobenius(n), &x, p) != Vec::<u32>::new() {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|r| {
        let h = sub(&frobenius(n / r as usize), &x, p);
        gcd(f, &h, p) == vec![1]
    })
}

/// Whether the class of `x` generates the multiplicative group of
/// GF(p)[x]/(f), assuming `f` irreducible of degree `n` with `q = p^n`.
pub(crate) fn x_is_primitive(f: &[u32], p: u32, q: u64) -> bool {
    let x: Poly = vec![0, 1];
    if rem(&x, f, p).is_empty() {
        return false;
    }
    let order = q - 1;
    prime_factors(order)
        .into_iter()
        .all(|r| pow_mod(&x, order / r, f, p) != vec![1])
}

/// Base-`p` digits of `packed`, `len` of them, lowest first.
pub(crate) fn unpack(mut packed: u64, p: u32, len: usize) -> Poly {
    (0..len)
        .map(|_| {
            let d = (packed % p as u64) as u32;
            packed /= p as u64;
            d
        })
        .collect()
}
