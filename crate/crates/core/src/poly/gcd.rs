//! Multivariate gcd by recursive content / primitive part reduction with a
//! primitive pseudo-remainder sequence in the main variable.

use num_traits::Zero;

use super::{Poly, PolyError, Rational};

/// Greatest common divisor of a list, normalized to leading coefficient 1.
pub fn content_gcd(ps: &[Poly]) -> Result<Poly, PolyError> {
    let first = ps.iter().find(|p| !p.is_zero()).ok_or(PolyError::AllZero)?;
    let nvars = first.nvars();
    for p in ps {
        if p.nvars() != nvars {
            return Err(PolyError::NvarsMismatch { left: nvars, right: p.nvars() });
        }
    }
    Ok(gcd_list(ps.iter(), nvars))
}

fn gcd_list<'a>(ps: impl Iterator<Item = &'a Poly>, nvars: usize) -> Poly {
    let mut g = Poly::zero(nvars);
    for p in ps {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let nvars = a.nvars();
    if a.is_constant() || b.is_constant() {
        return Poly::one(nvars);
    }
    let v = a
        .max_variable()
        .into_iter()
        .chain(b.max_variable())
        .max()
        .expect("non-constant input");

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides").integer_primitive();
    let mut pb = b.div_exact(&cb).expect("content divides").integer_primitive();
    if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 || coprime_by_specialization(&pa, &pb) {
        return c.monic();
    }
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        let r = pseudo_remainder(&pa, &pb, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return c.monic();
        }
        pa = pb;
        // dropping the numeric content keeps coefficient growth in check
        pb = primitive_part_in(&r, v).integer_primitive();
    }
    (&c * &primitive_part_in(&pb, v)).monic()
}

/// Sufficient test for `gcd(a, b) = 1`: for each shared variable `u`, some
/// integer specialization of the other variables that keeps both leading
/// coefficients in `u` nonzero has coprime univariate images. The degree in
/// `u` of the gcd is bounded by that of the images, so success is a proof.
fn coprime_by_specialization(a: &Poly, b: &Poly) -> bool {
    let nvars = a.nvars();
    let points: [[i64; 8]; 3] =
        [[2, -3, 5, 7, -11, 13, 17, -19], [-4, 9, 3, -8, 6, 5, -2, 11], [7, 2, -6, 3, 10, -5, 4, 9]];
    (0..nvars).filter(|&u| a.degree_in(u) > 0 && b.degree_in(u) > 0).all(|u| {
        points.iter().any(|pt| {
            let images: Vec<Poly> = (0..nvars)
                .map(|i| {
                    if i == u {
                        Poly::var(u, nvars)
                    } else {
                        Poly::constant(Rational::from_integer(pt[i % 8].into()), nvars)
                    }
                })
                .collect();
            let (sa, sb) = (a.substitute(&images).unwrap(), b.substitute(&images).unwrap());
            if sa.degree_in(u) != a.degree_in(u) || sb.degree_in(u) != b.degree_in(u) {
                return false;
            }
            univariate_gcd_degree(&sa, &sb, u) == 0
        })
    })
}

/// Euclid over the rationals for polynomials involving only `u`.
fn univariate_gcd_degree(a: &Poly, b: &Poly, u: usize) -> u32 {
    let coeffs = |p: &Poly| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); p.degree_in(u) as usize + 1];
        for (m, c) in p.terms() {
            v[m.exponent(u) as usize] = c.clone();
        }
        v
    };
    let (mut x, mut y) = (coeffs(a), coeffs(b));
    let trim = |v: &mut Vec<Rational>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        // x mod y
        let lead = y.last().unwrap().clone();
        while x.len() >= y.len() {
            let q = x.last().unwrap() / &lead;
            let off = x.len() - y.len();
            for (i, c) in y.iter().enumerate() {
                x[off + i] -= &q * c;
            }
            x.pop();
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len().saturating_sub(1) as u32
}

/// Gcd of the coefficients of `p` regarded as a polynomial in `v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    let coeffs = p.coefficients_in(v);
    gcd_list(coeffs.values(), p.nvars())
}

fn primitive_part_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_remainder(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lb = b.coefficients_in(v).remove(&db).expect("leading coefficient");
    let nvars = a.nvars();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coefficients_in(v).remove(&dr).expect("leading coefficient");
        let shift = Poly::var(v, nvars).pow(dr - db);
        r = &(&r * &lb) - &(&(&lr * &shift) * b);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s, Some(4)).unwrap()
    }

    #[test]
    fn simple_cases() {
        assert_eq!(content_gcd(&[p("x0*x1"), p("x0*x2")]).unwrap(), p("x0"));
        assert_eq!(content_gcd(&[p("x0^2 - x1^2"), p("x0 - x1")]).unwrap(), p("x0 - x1"));
        assert_eq!(content_gcd(&[p("3*x0"), p("0")]).unwrap(), p("x0"));
        assert_eq!(content_gcd(&[p("x0 + 1"), p("x1")]).unwrap(), p("1"));
    }

    #[test]
    fn all_zero_rejected() {
        assert_eq!(content_gcd(&[]), Err(PolyError::AllZero));
        assert_eq!(content_gcd(&[p("0"), p("0")]), Err(PolyError::AllZero));
    }

    /// Brute-force oracle: enumerate candidate factors built from a small pool
    /// of irreducibles and keep the largest product dividing both inputs.
    #[test]
    fn matches_factor_enumeration() {
        let a = p("x0*x3*(x0+x1)");
        let b = p("x3^2*(x0+x1)");
        let pool = [p("x0"), p("x1"), p("x3"), p("x0+x1"), p("x2")];
        let mut best = p("1");
        for mask in 0u32..(1 << (2 * pool.len())) {
            let mut cand = p("1");
            for (i, f) in pool.iter().enumerate() {
                let e = (mask >> (2 * i)) & 3;
                cand = &cand * &f.pow(e);
            }
            if a.div_exact(&cand).is_some()
                && b.div_exact(&cand).is_some()
                && cand.total_degree() > best.total_degree()
            {
                best = cand;
            }
        }
        let g = content_gcd(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(g, best.monic());
        assert_eq!(g, p("x0*x3 + x1*x3"));
    }
}
