//! Division polynomials of `y^2 = x^3 + a4 x + a6`.
//!
//! `psi_n = f_n` for odd `n` and `psi_n = 2y f_n` for even `n`, with `f_n`
//! a polynomial in `x` alone (`y^2` replaced by the cubic).

use std::collections::BTreeMap;

use super::WeierstrassCurve;
use crate::padic::Padic;
use crate::poly::Poly;

#[derive(Debug, Clone)]
pub struct DivisionPoly {
    pub n: u64,
    /// The `x`-part `f_n`.
    pub x_part: Poly,
    /// Set for even `n`: `psi_n` carries the extra factor `2y`.
    pub y_factor: bool,
}

struct Builder<'a> {
    cubic2: Poly,
    f: BTreeMap<u64, Poly>,
    e: &'a WeierstrassCurve,
}

impl Builder<'_> {
    fn base(&mut self, n: u64) -> Poly {
        let e = self.e;
        let p = e.prime();
        let prec = e.prec();
        let c = |k: i64| Padic::from_i64(k, p, prec);
        let (a, b) = (e.a4().clone(), e.a6().clone());
        match n {
            0 => Poly::zero(p),
            1 | 2 => Poly::constant(c(1)),
            3 => Poly::new(
                p,
                vec![-a.square(), b.mul_int(12), a.mul_int(6), Padic::exact_zero(p), c(3)],
            ),
            4 => {
                let inner = Poly::new(
                    p,
                    vec![
                        &(-b.square().mul_int(8)) - &a.pow(3),
                        -(&a * &b).mul_int(4),
                        -a.square().mul_int(5),
                        b.mul_int(20),
                        a.mul_int(5),
                        Padic::exact_zero(p),
                        c(1),
                    ],
                );
                inner.scale(&c(2))
            }
            _ => unreachable!(),
        }
    }

    fn get(&mut self, n: u64) -> Poly {
        if let Some(f) = self.f.get(&n) {
            return f.clone();
        }
        let out = if n <= 4 {
            self.base(n)
        } else if n % 2 == 1 {
            let m = (n - 1) / 2;
            let (fm2, fm, fm1, fp1) = (self.get(m + 2), self.get(m), self.get(m - 1), self.get(m + 1));
            let left = &fm2 * &fm.pow(3);
            let right = &fm1 * &fp1.pow(3);
            if m.is_multiple_of(2) {
                &(&self.cubic2 * &left) - &right
            } else {
                &left - &(&self.cubic2 * &right)
            }
        } else {
            let m = n / 2;
            let (fm, fm2, fm1, fmm2, fp1) = (self.get(m), self.get(m + 2), self.get(m - 1), self.get(m - 2), self.get(m + 1));
            &fm * &(&(&fm2 * &fm1.pow(2)) - &(&fmm2 * &fp1.pow(2)))
        };
        self.f.insert(n, out.clone());
        out
    }
}

/// `f_n` from the standard recurrence.
pub fn division_poly(e: &WeierstrassCurve, n: u64) -> DivisionPoly {
    assert!(n >= 1, "division polynomials start at n = 1");
    let cubic = e.rhs_poly();
    let sixteen = Padic::from_i64(16, e.prime(), e.prec());
    let cubic2 = (&cubic * &cubic).scale(&sixteen);
    let mut b = Builder { cubic2, f: BTreeMap::new(), e };
    DivisionPoly { n, x_part: b.get(n), y_factor: n.is_multiple_of(2) }
}
