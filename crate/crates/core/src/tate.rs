//! The Tate curve in short Weierstrass form.
//!
//! Starting from `Y^2 + XY = X^3 + a4(q) X + a6(q)` with the classical
//! `q`-series, the substitution `x = X + 1/12`, `y = Y + X/2` gives
//! `y^2 = x^3 + A4(q) x + A6(q)` with `A4(0) = -1/48`, `A6(0) = 1/864`.
//! In these coordinates the uniformization is
//!
//! `x(q, z) = sum_{n in Z} f(q^n z) - 2 s1(q) + 1/12`, `f(w) = w/(1-w)^2`,
//! `y(q, z) = sum_{n in Z} g(q^n z)`, `g(w) = w(1+w)/(2(1-w)^3)`,
//!
//! using `f(1/w) = f(w)` and `g(1/w) = -g(w)` for the negative indices.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::elliptic::{exact_order, CurveAt, CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::hensel::{newton_solve, Derivative, NewtonOutcome, NewtonProblem};
use crate::padic::{check_prime, Padic};
use crate::series::PadicSeries;

#[derive(Debug, Clone)]
pub struct TateModel {
    p: u64,
    prec: i64,
    trunc: i64,
    a4: PadicSeries,
    a6: PadicSeries,
    jinv: PadicSeries,
    q_of_jinv: PadicSeries,
}

fn sigma(k: u32, m: u64) -> BigInt {
    (1..=m).filter(|d| m.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(k)).sum()
}

/// `sum_{m >= 1} sigma_k(m) q^m` up to `O(q^trunc)`.
fn eisenstein_tail(k: u32, p: u64, prec: i64, trunc: i64) -> PadicSeries {
    let mut cs = vec![Padic::exact_zero(p)];
    for m in 1..trunc as u64 {
        cs.push(Padic::from_bigint(&sigma(k, m), p, prec));
    }
    PadicSeries::from_coeffs(p, &cs, trunc)
}

/// Coefficients `[a1, a2, a3, a4, a6]` after `X = x + r`, `Y = y + s x + t`.
fn change_coordinates(a: &[PadicSeries; 5], r: &Padic, s: &Padic, t: &Padic) -> [PadicSeries; 5] {
    let [a1, a2, a3, a4, a6] = a;
    let trunc = a1.trunc();
    let c = |v: Padic| PadicSeries::constant(v, trunc);
    let b1 = a1 + &c(s.mul_int(2));
    let b2 = &(&(a2 - &a1.scale(s)) + &c(r.mul_int(3))) - &c(s.square());
    let b3 = &(a3 + &a1.scale(r)) + &c(t.mul_int(2));
    let b4 = &(&(&(a4 - &a3.scale(s)) + &a2.scale(&r.mul_int(2))) - &a1.scale(&(t + &(r * s))))
        + &c(&r.square().mul_int(3) - &(s * t).mul_int(2));
    let b6 = &(&(&(&(a6 + &a4.scale(r)) + &a2.scale(&r.square())) - &a3.scale(t)) - &a1.scale(&(r * t)))
        + &c(&r.pow(3) - &t.square());
    [b1, b2, b3, b4, b6]
}

fn leading_terms(a: &[PadicSeries; 5]) -> String {
    format!(
        "a1 = {}, a2 = {}, a3 = {}, a4(0) = {}, a6(0) = {}",
        a[0].coeff(0),
        a[1].coeff(0),
        a[2].coeff(0),
        a[3].coeff(0),
        a[4].coeff(0)
    )
}

/// Which of the two readings of the affine change of coordinates to use.
fn pick_direction(p: u64, prec: i64, classical: &[PadicSeries; 5]) -> Result<[PadicSeries; 5]> {
    let q = |n: i64, d: i64| Padic::rational(n, d, p, prec);
    let a4_0 = q(-1, 48)?;
    let a6_0 = q(1, 864)?;
    // X = x - 1/12, Y = y - X/2 and its mirror X = x + 1/12, Y = y + X/2
    let forward = change_coordinates(classical, &q(-1, 12)?, &q(-1, 2)?, &q(1, 24)?);
    let mirror = change_coordinates(classical, &q(1, 12)?, &q(1, 2)?, &q(1, 24)?);
    let fits = |a: &[PadicSeries; 5]| {
        a[0].is_zero()
            && a[1].is_zero()
            && a[2].is_zero()
            && (&a[3].coeff(0) - &a4_0).is_zero()
            && (&a[4].coeff(0) - &a6_0).is_zero()
    };
    match (fits(&forward), fits(&mirror)) {
        (true, _) => Ok(forward),
        (false, true) => Ok(mirror),
        _ => Err(Error::Invariant(format!(
            "neither coordinate change reaches y^2 = x^3 - x/48 + 1/864 at q = 0: [{}] vs [{}]",
            leading_terms(&forward),
            leading_terms(&mirror)
        ))),
    }
}

impl TateModel {
    pub fn build(p: u64, prec: i64, trunc: i64) -> Result<Self> {
        check_prime(p)?;
        if prec < 2 {
            return Err(Error::InvalidPrecision(prec));
        }
        if trunc < 3 {
            return Err(Error::Domain(format!("series order {trunc} is too small")));
        }
        let s3 = eisenstein_tail(3, p, prec, trunc);
        let s5 = eisenstein_tail(5, p, prec, trunc);
        let a4 = s3.scale(&Padic::from_i64(-5, p, prec));
        let a6 = (&s3.scale(&Padic::from_i64(5, p, prec)) + &s5.scale(&Padic::from_i64(7, p, prec)))
            .scale(&Padic::rational(-1, 12, p, prec)?);
        let zero = PadicSeries::constant(Padic::exact_zero(p), trunc);
        let classical = [PadicSeries::constant(Padic::one(p, prec), trunc), zero.clone(), zero, a4, a6];
        let [_, _, _, a4, a6] = pick_direction(p, prec, &classical)?;

        let num = &a4.pow(3).scale(&Padic::from_i64(4, p, prec)) + &a6.pow(2).scale(&Padic::from_i64(27, p, prec));
        if !num.coeff(0).is_zero() {
            return Err(Error::Invariant("the fiber at q = 0 is not singular".into()));
        }
        let num = num.with_coeff(0, Padic::exact_zero(p));
        let den = a4.pow(3).scale(&Padic::from_i64(6912, p, prec));
        let jinv = (&num * &den.reciprocal()?).truncate(trunc);
        let jinv = PadicSeries::from_coeffs(p, &(0..jinv.trunc()).map(|k| jinv.coeff(k)).collect::<Vec<_>>(), jinv.trunc());
        let c1 = jinv.coeff(1);
        if !(&c1 - &Padic::one(p, prec)).is_zero() {
            return Err(Error::Invariant(format!("1/j starts with {c1} q instead of q")));
        }
        let q_of_jinv = jinv.comp_inverse()?;
        Ok(TateModel { p, prec, trunc, a4, a6, jinv, q_of_jinv })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn series_order(&self) -> i64 {
        self.trunc
    }

    pub fn a4_series(&self) -> &PadicSeries {
        &self.a4
    }

    pub fn a6_series(&self) -> &PadicSeries {
        &self.a6
    }

    /// `1/j(T_q)` as a series in `q`.
    pub fn jinv_series(&self) -> &PadicSeries {
        &self.jinv
    }

    /// The compositional inverse of `1/j`, i.e. `q` as a series in `1/j`.
    pub fn q_of_jinv_series(&self) -> &PadicSeries {
        &self.q_of_jinv
    }

    /// `j(T_q)` as a Laurent series `1/q + 744 + ...`.
    pub fn j_series(&self) -> Result<PadicSeries> {
        self.jinv.reciprocal()
    }

    fn check_q(&self, q: &Padic) -> Result<()> {
        if q.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p, q.prime()));
        }
        if !q.is_exact_zero() && (q.is_zero() || q.val() < 1) {
            return Err(Error::Domain(format!("q = {q} must lie in pZ_p")));
        }
        Ok(())
    }

    /// `y^2 = x^3 + A4(q) x + A6(q)`; the nodal cubic at `q = 0`.
    pub fn curve_at(&self, q: &Padic) -> Result<CurveAt> {
        self.check_q(q)?;
        let (a4, a6) = if q.is_exact_zero() {
            (self.a4.coeff(0), self.a6.coeff(0))
        } else {
            (self.a4.eval(q)?, self.a6.eval(q)?)
        };
        WeierstrassCurve::classify(a4, a6)
    }

    /// `z q^-k` with `0 <= val < val(q)`, and `k`.
    fn reduce(&self, q: &Padic, z: &Padic) -> Result<(Padic, i64)> {
        if z.is_zero() {
            return Err(Error::Domain("z must be a nonzero element of Q_p".into()));
        }
        if q.is_exact_zero() {
            return Ok((z.clone(), 0));
        }
        let k = Integer::div_floor(&z.val(), &q.val());
        if k == 0 {
            return Ok((z.clone(), 0));
        }
        Ok((z.try_div(&q.powi(k)?)?, k))
    }

    /// Number of terms in each direction so that dropped terms have
    /// valuation at least `self.prec`, given `val z` in `[0, val q)`.
    fn term_counts(&self, q: &Padic, vz: i64) -> (i64, i64) {
        if q.is_exact_zero() {
            return (0, 0);
        }
        let vq = q.val();
        let fwd = Integer::div_ceil(&(self.prec - vz), &vq).max(0);
        let back = Integer::div_ceil(&(self.prec + vz), &vq).max(0);
        (fwd, back)
    }

    fn s1(&self, q: &Padic, n_terms: i64) -> Padic {
        let mut acc = Padic::exact_zero(self.p);
        let mut qn = q.one_like();
        for n in 1..=n_terms as u64 {
            qn = &qn * q;
            acc = &acc + &(&qn * &Padic::from_bigint(&sigma(1, n), self.p, self.prec));
        }
        acc
    }

    fn check_pole(&self, w: &Padic) -> Result<Padic> {
        let d = &w.one_like() - w;
        if d.is_zero() {
            return Err(Error::Domain("z lies in q^Z: request the identity explicitly".into()));
        }
        Ok(d)
    }

    fn f(&self, w: &Padic) -> Result<Padic> {
        let d = self.check_pole(w)?;
        w.try_div(&d.square())
    }

    fn g(&self, w: &Padic) -> Result<Padic> {
        let d = self.check_pole(w)?;
        (w * &(&w.one_like() + w)).try_div(&d.pow(3).mul_int(2))
    }

    /// `f'(w) = (1 + w)/(1 - w)^3`.
    fn df(&self, w: &Padic) -> Result<Padic> {
        let d = self.check_pole(w)?;
        (&w.one_like() + w).try_div(&d.pow(3))
    }

    /// Forward points `q^n z` (`n >= 1`) and backward points `q^m / z` (`m >= 1`).
    fn orbit(&self, q: &Padic, z: &Padic) -> Result<(Vec<Padic>, Vec<Padic>)> {
        let (fwd_n, back_n) = self.term_counts(q, z.val());
        let mut fwd = Vec::new();
        let mut w = z.clone();
        for _ in 0..fwd_n {
            w = &w * q;
            fwd.push(w.clone());
        }
        let mut back = Vec::new();
        let zi = z.inv()?;
        let mut w = zi;
        for _ in 0..back_n {
            w = &w * q;
            back.push(w.clone());
        }
        Ok((fwd, back))
    }

    fn tail_cap(&self, q: &Padic, v: Padic) -> Padic {
        if q.is_exact_zero() {
            v
        } else {
            v.with_prec(self.prec)
        }
    }

    /// `x(q, z)` in the short Weierstrass coordinates.
    pub fn x_coord(&self, q: &Padic, z: &Padic) -> Result<Padic> {
        self.check_q(q)?;
        let (z, _) = self.reduce(q, z)?;
        let (fwd, back) = self.orbit(q, &z)?;
        let mut acc = self.f(&z)?;
        for w in fwd.iter().chain(back.iter()) {
            acc = &acc + &self.f(w)?;
        }
        let (fwd_n, _) = self.term_counts(q, 0);
        acc = &acc - &self.s1(q, fwd_n).mul_int(2);
        acc = &acc + &Padic::rational(1, 12, self.p, self.prec)?;
        Ok(self.tail_cap(q, acc))
    }

    pub fn y_coord(&self, q: &Padic, z: &Padic) -> Result<Padic> {
        self.check_q(q)?;
        let (z, _) = self.reduce(q, z)?;
        let (fwd, back) = self.orbit(q, &z)?;
        let mut acc = self.g(&z)?;
        for w in &fwd {
            acc = &acc + &self.g(w)?;
        }
        for w in &back {
            acc = &acc - &self.g(w)?;
        }
        Ok(self.tail_cap(q, acc))
    }

    /// The point `eta_q(z)` on `curve_at(q)`.
    pub fn unif(&self, q: &Padic, z: &Padic) -> Result<CurvePoint> {
        Ok(CurvePoint::Affine { x: self.x_coord(q, z)?, y: self.y_coord(q, z)? })
    }

    fn require_annulus(&self, q: &Padic, z: &Padic) -> Result<()> {
        if z.is_zero() || z.val() < 0 || (!q.is_exact_zero() && z.val() >= q.val()) {
            return Err(Error::Domain("derivatives are taken for z in the annulus 0 <= val z < val q".into()));
        }
        Ok(())
    }

    /// `dx/dz` for `z` in the fundamental annulus.
    pub fn x_dz(&self, q: &Padic, z: &Padic) -> Result<Padic> {
        self.check_q(q)?;
        self.require_annulus(q, z)?;
        let (fwd, back) = self.orbit(q, z)?;
        let mut acc = self.df(z)?;
        let mut qn = z.one_like();
        for w in &fwd {
            qn = &qn * q;
            acc = &acc + &(&qn * &self.df(w)?);
        }
        let zi = z.inv()?;
        for w in &back {
            acc = &acc - &(&(w * &zi) * &self.df(w)?);
        }
        Ok(self.tail_cap(q, acc))
    }

    /// `dx/dq` at fixed `z` in the fundamental annulus.
    pub fn x_dq(&self, q: &Padic, z: &Padic) -> Result<Padic> {
        self.check_q(q)?;
        self.require_annulus(q, z)?;
        let zi = z.inv()?;
        if q.is_exact_zero() {
            // z f'(0) + f'(0)/z - 2 sigma_1(1)
            return Ok(&(z + &zi) - &Padic::from_i64(2, self.p, self.prec));
        }
        let (fwd_n, back_n) = self.term_counts(q, z.val());
        // the n-th derivative term is q^(n-1)-sized, one index behind x itself
        let extra = 1;
        let mut acc = Padic::exact_zero(self.p);
        let mut qn1 = q.one_like();
        for n in 1..=fwd_n + extra {
            let w = &(&qn1 * q) * z;
            acc = &acc + &(&(&qn1 * z).mul_int(n) * &self.df(&w)?);
            qn1 = &qn1 * q;
        }
        let mut qm1 = q.one_like();
        for m in 1..=back_n + extra {
            let w = &(&qm1 * q) * &zi;
            acc = &acc + &(&(&qm1 * &zi).mul_int(m) * &self.df(&w)?);
            qm1 = &qm1 * q;
        }
        let mut ds1 = Padic::exact_zero(self.p);
        let mut qn1 = q.one_like();
        for n in 1..=fwd_n + extra {
            ds1 = &ds1 + &(&qn1 * &Padic::from_bigint(&(sigma(1, n as u64) * n), self.p, self.prec));
            qn1 = &qn1 * q;
        }
        acc = &acc - &ds1.mul_int(2);
        Ok(acc.with_prec(self.prec - q.val()))
    }

    /// Order of `z` in `Q_p^* / q^Z`: with `n0 = val q / gcd(val z, val q)`
    /// and `u = z^n0 q^(-n0 val z / val q)`, `z` is torsion iff the unit `u`
    /// is a `(p-1)`-st root of unity, of order `n0 * ord(u)`. The answer is
    /// cross-checked by the group law on `curve_at(q)`.
    pub fn is_torsion(&self, q: &Padic, z: &Padic, max_n: u64) -> Result<TateOrder> {
        self.check_q(q)?;
        if q.is_exact_zero() {
            return Err(Error::Domain("q must be nonzero".into()));
        }
        if z.is_zero() {
            return Err(Error::Domain("z must be nonzero".into()));
        }
        let (vq, vz) = (q.val(), z.val());
        let n0 = (vq / vz.gcd(&vq)) as u64;
        let u = z.pow(n0).try_div(&q.powi(n0 as i64 * vz / vq)?)?;
        let test = &u.pow(self.p - 1) - &u.one_like();
        if test.prec() <= 0 {
            return Err(Error::PrecisionExhausted("root-of-unity test has no digits".into()));
        }
        if !test.is_zero() {
            return Ok(TateOrder { n0, unit: u, order: None });
        }
        let ord_u = (1..self.p).find(|d| (self.p - 1).is_multiple_of(*d) && (&u.pow(*d) - &u.one_like()).is_zero()).unwrap();
        let order = n0 * ord_u;
        if order > max_n {
            return Ok(TateOrder { n0, unit: u, order: None });
        }
        let curve = self.curve_at(q)?.smooth()?;
        let pt = match self.unif(q, z) {
            Ok(pt) => pt,
            Err(Error::Domain(_)) if order == 1 => CurvePoint::Infinity,
            Err(e) => return Err(e),
        };
        let check = exact_order(&curve, &pt, max_n)?;
        if check.order() != Some(order) {
            return Err(Error::Certification(format!(
                "Tate criterion gives order {order}, the group law gives {:?}",
                check.order()
            )));
        }
        Ok(TateOrder { n0, unit: u, order: Some(order) })
    }

    /// Solves `x(q, z) = x_target` by Newton's method from `z = p`.
    pub fn solve_z(&self, x_target: &Padic, q: &Padic) -> Result<NewtonOutcome> {
        self.check_q(q)?;
        let p = self.p;
        let seed = Padic::from_i64(p as i64, p, self.prec);
        let xt = x_target.clone();
        let qq = q.clone();
        let f0 = &self.x_coord(q, &seed)? - x_target;
        let target = (f0.prec() - 2).max(1);
        let (qd, me) = (q.clone(), self);
        let prob = NewtonProblem {
            eval: Box::new(move |z| Ok(&me.x_coord(&qq, z)? - &xt)),
            deriv: Derivative::Exact(Box::new(move |z| me.x_dz(&qd, z))),
            seed,
            target_prec: target,
        };
        newton_solve(&prob)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateOrder {
    pub n0: u64,
    pub unit: Padic,
    pub order: Option<u64>,
}
