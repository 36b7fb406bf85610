//! Generating functions `G_n(v, q) = Σ v^Fib(π) q^inv(π)` over each class,
//! the Fibonacci specialization `F_n(q)`, and the closed forms, recurrences
//! and addition formulas expressed through them.
//!
//! Formulas that take a [`Variant`] evaluate the printed expression for
//! `Paper` and the registered correction for `Corrected`; see
//! [`crate::verify::registry`] for what each correction changes.

use crate::classes::{generate, ClassId};
use crate::error::{Error, Result};
use crate::fib::fib_stat;
use crate::perm::inversions;
use crate::poly::BivariatePolynomial as Poly;
use crate::stats::{binomial, Variant};

fn choose2(x: usize) -> u32 {
    (x * x.saturating_sub(1) / 2) as u32
}

/// `F_n(q)` by the recurrence `F_n = F_{n-1} + q F_{n-2}`, `F_0 = F_1 = 1`.
pub fn fib_poly(n: usize) -> Poly {
    let (mut a, mut b) = (Poly::one(), Poly::one());
    for _ in 0..n {
        let next = &b + &a.shift(0, 1);
        a = b;
        b = next;
    }
    a
}

/// `F_n(q) = Σ_k C(n-k, k) q^k`.
pub fn fib_poly_from_binomials(n: usize) -> Result<Poly> {
    let coeffs = (0..=n / 2)
        .map(|k| {
            let c = binomial((n - k) as i64, k as i64)?;
            i128::try_from(c).map_err(|_| Error::Overflow(format!("F_{n}(q)")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_q_coefficients(&coeffs))
}

/// `G_n` tabulated over the structurally generated class.
pub fn genfun_oracle(class: ClassId, n: usize) -> Result<Poly> {
    let mut g = Poly::zero();
    for p in generate(class, n)? {
        g = &g + &Poly::monomial(1, fib_stat(&p) as u32, inversions(&p) as u32);
    }
    Ok(g)
}

/// `G_n = F_n(q) v^n + Σ_{j=0}^{n-3} q^{e(j)} v^j F_j(q)` where the class
/// fixes the head exponent `e(j)`.
pub fn genfun_closed(class: ClassId, n: usize, variant: Variant) -> Result<Poly> {
    if n < 3 {
        return Err(Error::UnsupportedLength { n, min: 3 });
    }
    let mut g = fib_poly(n).shift(n as u32, 0);
    for j in 0..=n - 3 {
        let q_exp: u32 = match (class, variant) {
            (ClassId::A1, _) => 3,
            (ClassId::A2, _) => 2,
            (ClassId::B1, Variant::Paper) => choose2(j),
            (ClassId::B1, Variant::Corrected) => choose2(n - j),
            (ClassId::B2, Variant::Paper) => {
                if j == 0 {
                    return Err(Error::NotEvaluable(format!(
                        "term q^(j-1) at j = 0 has exponent -1 (n = {n})"
                    )));
                }
                (j - 1) as u32
            }
            (ClassId::B2, Variant::Corrected) => (n - j - 1) as u32,
        };
        g = &g + &fib_poly(j).shift(j as u32, q_exp);
    }
    Ok(g)
}

/// The member counted by neither recursive term: `q^3`, `q^2`, `q^C(n,2)`
/// or `q^(n-1)`.
pub fn recurrence_head(class: ClassId, n: usize) -> Poly {
    let q_exp = match class {
        ClassId::A1 => 3,
        ClassId::A2 => 2,
        ClassId::B1 => choose2(n),
        ClassId::B2 => n.saturating_sub(1) as u32,
    };
    Poly::monomial(1, 0, q_exp)
}

/// `head(n) + v·g_prev + q v²·g_prev2`.
pub fn recurrence_rhs(class: ClassId, n: usize, g_prev: &Poly, g_prev2: &Poly) -> Poly {
    &(&recurrence_head(class, n) + &g_prev.shift(1, 0)) + &g_prev2.shift(2, 1)
}

/// `G_n` for `n >= 3` by the recurrence, from `G_1 = v` and `G_2 = v² + qv²`.
pub fn genfun_recurrence(class: ClassId, n: usize) -> Result<Poly> {
    if n < 3 {
        return Err(Error::UnsupportedLength { n, min: 3 });
    }
    let mut prev2 = Poly::v();
    let mut prev = Poly::monomial(1, 2, 0) + Poly::monomial(1, 2, 1);
    for k in 3..=n {
        let next = recurrence_rhs(class, k, &prev, &prev2);
        prev2 = prev;
        prev = next;
    }
    Ok(prev)
}

/// Right-hand side of the addition formula for `G_{m+n}`, with the smaller
/// `G`s taken from [`genfun_oracle`].
pub fn genfun_addition(class: ClassId, m: usize, n: usize, variant: Variant) -> Result<Poly> {
    if m < 2 || n < 2 {
        return Err(Error::UnsupportedLength {
            n: m.min(n),
            min: 2,
        });
    }
    addition_rhs(class, m, n, variant, |len| genfun_oracle(class, len))
}

/// Same as [`genfun_addition`] with caller-supplied `G`s.
pub fn addition_rhs(
    class: ClassId,
    m: usize,
    n: usize,
    variant: Variant,
    g: impl Fn(usize) -> Result<Poly>,
) -> Result<Poly> {
    let (mu, nu) = (m as u32, n as u32);
    let f = fib_poly;
    let g_m = g(m)?;
    let g_m1 = g(m - 1)?;
    let descent_v = match variant {
        Variant::Paper => nu + 2,
        Variant::Corrected => nu + 1,
    };
    // Cut falls between two blocks of the Fibonacci tail, or inside one.
    let shared = &(&g_m * &f(n)).shift(nu, 0) + &(&g_m1 * &f(n - 1)).shift(descent_v, 1);
    let non_fib_g_n = || -> Result<Poly> { Ok(&g(n)? - &f(n).shift(nu, 0)) };
    let rest = match class {
        ClassId::A1 | ClassId::A2 => {
            let core = if class == ClassId::A1 { 3 } else { 2 };
            &(&f(n - 1).shift(nu - 1, core) + &f(n - 2).shift(nu - 2, core)) + &non_fib_g_n()?
        }
        ClassId::B1 => match variant {
            Variant::Paper => (0..=n)
                .map(|i| {
                    let iu = i as u32;
                    f(i).shift(choose2(m) + iu, choose2(i) + iu * mu)
                })
                .sum(),
            Variant::Corrected => (0..n)
                .map(|i| {
                    let s = n - i;
                    f(i).shift(i as u32, choose2(m) + choose2(s) + (s * m) as u32)
                })
                .sum(),
        },
        ClassId::B2 => {
            let mut r = &f(n - 1).shift(nu - 1, mu) + &non_fib_g_n()?.shift(0, mu);
            if variant == Variant::Corrected {
                r = &r + &f(n - 2).shift(nu - 2, mu + 1);
            }
            r
        }
    };
    Ok(&shared + &rest)
}
