//! The degenerating family
//!
//! `E_t: y^2 = (x - 1/12)^2 (x + 1/6) + t (x - c - 1/12)`, `c = p/(1-p)^2`,
//!
//! with the constant section `s = (c + 1/12, p(1+p)/(2(1-p)^3))`, glued to
//! the Tate family along `phi = q(1/j) o (1/j(E_t))`. On `E_t` the section
//! corresponds to the Tate parameter `shat(t)`, and `phi(t) = shat(t)^n`
//! forces `s` to have exact order `n` on `E_t`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::{
    exact_order, torsion_scan, CurveAt, CurvePoint, OrderCertificate, OrderResult, ScanRecord, TorsionScan,
    UnresolvedClass, WeierstrassCurve,
};
use crate::error::{Error, Result};
use crate::hensel::{newton_solve, Derivative, NewtonOutcome, NewtonProblem, NewtonStep};
use crate::padic::{check_prime, Padic};
use crate::series::PadicSeries;
use crate::tate::TateModel;

/// Smallest valuation of `t` accepted by the pipeline evaluators.
pub const MIN_T_VAL: i64 = 3;

type RatPoly = Vec<BigRational>;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rat_mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(x - 1/12)^2 (x + 1/6)` expanded over `Q`, lowest degree first.
pub fn nodal_cubic() -> RatPoly {
    let lin = |c: BigRational| vec![c, BigRational::one()];
    rat_mul(&rat_mul(&lin(rat(-1, 12)), &lin(rat(-1, 12))), &lin(rat(1, 6)))
}

#[derive(Debug, Clone)]
pub struct FamilyModel {
    p: u64,
    prec: i64,
    trunc: i64,
    tate: TateModel,
    a2: PadicSeries,
    b2: PadicSeries,
    jinv_e: PadicSeries,
    phi: PadicSeries,
    alpha: PadicSeries,
    beta: PadicSeries,
    lambda: PadicSeries,
    shat: PadicSeries,
    section_x: Padic,
    section_y: Padic,
}

/// `shat(t)` together with the data that pinned it down.
#[derive(Debug, Clone)]
pub struct ShatValue {
    pub z: Padic,
    pub q: Padic,
    pub lambda: Padic,
    /// `+1` when `(x, y) -> (x/lambda^2, y/lambda^3)` carries the section to
    /// `eta_q(z)`; `-1` when that needed `-lambda`.
    pub branch: i8,
    pub newton: NewtonOutcome,
}

impl FamilyModel {
    pub fn build(p: u64, prec: i64, trunc: i64) -> Result<Self> {
        check_prime(p)?;
        let tate = TateModel::build(p, prec, trunc)?;
        let pa = |r: &BigRational| Padic::from_rational(r.numer(), r.denom(), p, prec);
        let c_rat = BigRational::new(BigInt::from(p), BigInt::from(1 - p as i64).pow(2));

        let cubic = nodal_cubic();
        if !cubic[2].is_zero() || !cubic[3].is_one() {
            return Err(Error::Invariant("nodal cubic is not depressed".into()));
        }
        // the t-part x - c - 1/12 adds t to the x-coefficient and
        // -t (c + 1/12) to the constant
        let a2 = PadicSeries::from_coeffs(p, &[pa(&cubic[1])?, Padic::one(p, prec)], trunc);
        let b2 = PadicSeries::from_coeffs(p, &[pa(&cubic[0])?, -pa(&(&c_rat + rat(1, 12)))?], trunc);
        let section_x = pa(&(&c_rat + rat(1, 12)))?;
        let section_y = Padic::from_rational(
            &BigInt::from(p * (1 + p)),
            &(BigInt::from(2) * BigInt::from(1 - p as i64).pow(3)),
            p,
            prec,
        )?;

        let num = &a2.pow(3).scale(&Padic::from_i64(4, p, prec)) + &b2.pow(2).scale(&Padic::from_i64(27, p, prec));
        if !num.coeff(0).is_zero() {
            return Err(Error::Invariant("E_0 is not singular".into()));
        }
        let num = num.with_coeff(0, Padic::exact_zero(p));
        let den = a2.pow(3).scale(&Padic::from_i64(6912, p, prec));
        let jinv_e = (&num * &den.reciprocal()?).truncate(trunc);
        let jinv_e = PadicSeries::from_coeffs(p, &(0..trunc).map(|k| jinv_e.coeff(k)).collect::<Vec<_>>(), trunc);
        let c = pa(&c_rat)?;
        if !(&jinv_e.coeff(1) - &c).is_zero() {
            return Err(Error::Invariant(format!("1/j(E_t) has linear coefficient {} instead of {c}", jinv_e.coeff(1))));
        }

        let phi = tate.q_of_jinv_series().compose(&jinv_e)?;
        if !(&phi.coeff(1) - &c).is_zero() || !phi.coeff(0).is_zero() {
            return Err(Error::Invariant("phi is not c t + O(t^2)".into()));
        }
        let phi = phi.with_coeff(0, Padic::exact_zero(p));
        let a1 = tate.a4_series().compose(&phi)?;
        let b1 = tate.a6_series().compose(&phi)?;
        let alpha = &a2 * &a1.reciprocal()?;
        let beta = &b2 * &b1.reciprocal()?;
        if !(&alpha.pow(3) - &beta.pow(2)).is_zero() {
            return Err(Error::Invariant("alpha^3 != beta^2: the j-invariants do not match".into()));
        }
        let lambda = (&beta * &alpha.reciprocal()?).sqrt()?;
        if !lambda.is_integral() {
            return Err(Error::Invariant("lambda is not integral".into()));
        }
        if !(&(&lambda.pow(4) * &a1) - &a2).is_zero() || !(&(&lambda.pow(6) * &b1) - &b2).is_zero() {
            return Err(Error::Invariant("lambda does not scale (A1, B1) to (A2, B2)".into()));
        }

        // shat(0) = p, and differentiating x(phi(t), shat(t)) = x_E / lambda(t)^2 at t = 0
        let zp = Padic::from_i64(p as i64, p, prec);
        let q0 = Padic::exact_zero(p);
        let rhs = &section_x.mul_int(-2) * &lambda.coeff(1);
        let slope = (&rhs - &(&tate.x_dq(&q0, &zp)? * &phi.coeff(1))).try_div(&tate.x_dz(&q0, &zp)?)?;
        let shat = PadicSeries::from_coeffs(p, &[zp, slope], 2);

        Ok(FamilyModel { p, prec, trunc, tate, a2, b2, jinv_e, phi, alpha, beta, lambda, shat, section_x, section_y })
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
    pub fn tate(&self) -> &TateModel {
        &self.tate
    }
    pub fn a2_series(&self) -> &PadicSeries {
        &self.a2
    }
    pub fn b2_series(&self) -> &PadicSeries {
        &self.b2
    }
    pub fn jinv_e_series(&self) -> &PadicSeries {
        &self.jinv_e
    }
    pub fn phi_series(&self) -> &PadicSeries {
        &self.phi
    }
    pub fn alpha_series(&self) -> &PadicSeries {
        &self.alpha
    }
    pub fn beta_series(&self) -> &PadicSeries {
        &self.beta
    }
    pub fn lambda_series(&self) -> &PadicSeries {
        &self.lambda
    }
    /// `shat(0) + shat'(0) t`.
    pub fn shat_series(&self) -> &PadicSeries {
        &self.shat
    }
    pub fn section_x(&self) -> &Padic {
        &self.section_x
    }
    pub fn section_y(&self) -> &Padic {
        &self.section_y
    }

    pub fn section(&self) -> CurvePoint {
        CurvePoint::Affine { x: self.section_x.clone(), y: self.section_y.clone() }
    }

    fn check_t(&self, t: &Padic) -> Result<()> {
        if t.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p, t.prime()));
        }
        if !t.is_exact_zero() && (t.is_zero() || t.val() < MIN_T_VAL) {
            return Err(Error::Domain(format!("t = {t} must have valuation at least {MIN_T_VAL}")));
        }
        Ok(())
    }

    /// `y^2 = x^3 + A2(t) x + B2(t)`; the nodal cubic at `t = 0`.
    pub fn curve_at(&self, t: &Padic) -> Result<CurveAt> {
        self.check_t(t)?;
        let a4 = &self.a2.coeff(0) + &(t * &self.a2.coeff(1));
        let a6 = &self.b2.coeff(0) + &(t * &self.b2.coeff(1));
        WeierstrassCurve::classify(a4, a6)
    }

    pub fn phi(&self, t: &Padic) -> Result<Padic> {
        self.check_t(t)?;
        self.phi.eval(t)
    }

    pub fn shat_eval(&self, t: &Padic) -> Result<ShatValue> {
        self.check_t(t)?;
        let q = self.phi.eval(t)?;
        let lambda = self.lambda.eval(t)?;
        let l2 = lambda.square();
        let x_target = self.section_x.try_div(&l2)?;
        let newton = self.tate.solve_z(&x_target, &q)?;
        let z = newton.root.clone();
        let y_t = self.tate.y_coord(&q, &z)?;
        let y_expect = self.section_y.try_div(&(&l2 * &lambda))?;
        let branch = if (&y_t - &y_expect).is_zero() {
            1
        } else if (&y_t + &y_expect).is_zero() {
            -1
        } else {
            return Err(Error::Invariant(format!(
                "eta_q(shat) has y = {y_t}, expected +-{y_expect}"
            )));
        };
        Ok(ShatValue { z, q, lambda: if branch == 1 { lambda } else { -lambda }, branch, newton })
    }

    /// `shat'(t)` by implicit differentiation of `x(phi(t), shat(t)) = x_E / lambda(t)^2`.
    fn shat_derivative(&self, t: &Padic, s: &ShatValue) -> Result<Padic> {
        let dphi = self.phi.derive().eval(t)?;
        let dlambda = self.lambda.derive().eval(t)?;
        let rhs = (&self.section_x.mul_int(-2) * &dlambda).try_div(&s.lambda.pow(3))?;
        let rhs = if s.branch == 1 { rhs } else { -rhs };
        let xq = self.tate.x_dq(&s.q, &s.z)?;
        let xz = self.tate.x_dz(&s.q, &s.z)?;
        (&rhs - &(&xq * &dphi)).try_div(&xz)
    }

    /// `F_n(t) = phi(t) - shat(t)^n`.
    pub fn f_n(&self, n: u32, t: &Padic) -> Result<Padic> {
        let s = self.shat_eval(t)?;
        Ok(&s.q - &s.z.pow(n as u64))
    }

    /// `F_n'(t) = phi'(t) - n shat(t)^(n-1) shat'(t)`.
    pub fn f_n_derivative(&self, n: u32, t: &Padic) -> Result<Padic> {
        let s = self.shat_eval(t)?;
        let dphi = self.phi.derive().eval(t)?;
        let ds = self.shat_derivative(t, &s)?;
        Ok(&dphi - &(&s.z.pow(n as u64 - 1) * &ds).mul_int(n as i64))
    }

    /// Seed `p^n / phi'(0) = (1 - p)^2 p^(n-1)` from `c t = p^n`.
    pub fn seed(&self, n: u32) -> Result<Padic> {
        let pn = Padic::p_power(self.p, n as i64, self.prec + n as i64);
        pn.try_div(&self.phi.coeff(1))
    }

    /// Solves `phi(t) = shat(t)^n` and certifies the order of the section on
    /// `E_{t_n}` by the group law alone.
    pub fn solve_tn(&self, n: u32) -> Result<TorsionRecord> {
        if n < 4 {
            return Err(Error::Domain(format!("n = {n}: the pipeline starts at n = 4")));
        }
        if self.prec < n as i64 + 20 {
            return Err(Error::InvalidPrecision(self.prec));
        }
        let out = self.newton_for(n, self.seed(n)?).or_else(|e| match e {
            Error::HenselHypothesis { .. } | Error::NewtonStalled { .. } => self.newton_from_scan(n),
            other => Err(other),
        })?;
        let t = out.root.clone();
        let curve = self.curve_at(&t)?.smooth()?;
        let cert = match exact_order(&curve, &self.section(), 2 * n as u64)? {
            OrderResult::Exact(c) => c,
            OrderResult::NotTorsionUpTo(b) => {
                return Err(Error::Certification(format!(
                    "n = {n}: section is not torsion of order <= {b} on E_t (Newton trace {:?})",
                    out.transcript
                )))
            }
        };
        if cert.order != n as u64 {
            return Err(Error::Certification(format!(
                "n = {n}: group law gives order {} (Newton trace {:?}, certificate {:?})",
                cert.order, out.transcript, cert
            )));
        }
        Ok(TorsionRecord {
            n,
            val_t: t.val(),
            leading_digit: t.leading_digit().unwrap_or(0),
            t,
            order_certificate: cert,
            newton_trace: Some(out.transcript),
        })
    }

    /// `solve_tn`, retried once on a model at twice the precision when the
    /// certificate runs out of digits.
    pub fn solve_tn_escalating(&self, n: u32) -> Result<TorsionRecord> {
        match self.solve_tn(n) {
            Err(Error::PrecisionExhausted(_)) => FamilyModel::build(self.p, 2 * self.prec, self.trunc)?.solve_tn(n),
            other => other,
        }
    }

    fn newton_for(&self, n: u32, seed: Padic) -> Result<NewtonOutcome> {
        let f0 = self.f_n(n, &seed)?;
        let target = (f0.prec() - 2).max(1);
        let prob = NewtonProblem {
            eval: Box::new(move |t| self.f_n(n, t)),
            deriv: Derivative::Exact(Box::new(move |t| self.f_n_derivative(n, t))),
            seed,
            target_prec: target,
        };
        newton_solve(&prob)
    }

    /// Fallback seeding: the first class of `p^(n-1) Z_p / p^(n+2)` whose
    /// center satisfies the Hensel inequality.
    fn newton_from_scan(&self, n: u32) -> Result<NewtonOutcome> {
        let classes = root_classes(self, n, 3)?;
        let Some(c) = classes.first() else {
            return Err(Error::HenselHypothesis { val_f: 0, val_df: 0 });
        };
        self.newton_for(n, c.clone())
    }

    /// Records for `n_min..=n_max` (solved in parallel, reported by `n`).
    pub fn accumulation_report(&self, n_min: u32, n_max: u32) -> Result<AccumulationReport> {
        if n_min < 4 || n_min > n_max {
            return Err(Error::Domain(format!("need 4 <= n_min <= n_max, got {n_min}..{n_max}")));
        }
        if self.prec < n_max as i64 + 20 {
            return Err(Error::InvalidPrecision(self.prec));
        }
        let results: Vec<Result<TorsionRecord>> = (n_min..=n_max).into_par_iter().map(|n| self.solve_tn_escalating(n)).collect();
        let records = results.into_iter().collect::<Result<Vec<_>>>()?;
        let summary = Summary::of(self.p, &records);
        Ok(AccumulationReport { p: self.p, prec: self.prec, series_order: self.trunc, records, summary })
    }
}

/// Centers `t = p^(n-1) k` of the classes modulo `p^(n-1+digits)` that
/// contain a root of `F_n`, decided by `val F_n(t) - val F_n'(t) >= n - 1 + digits`.
pub fn root_classes(model: &FamilyModel, n: u32, digits: u32) -> Result<Vec<Padic>> {
    let p = model.p;
    let depth = n as i64 - 1 + digits as i64;
    let base = Padic::p_power(p, n as i64 - 1, model.prec);
    let count = p.pow(digits);
    let found: Vec<Result<Option<Padic>>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let t = if k == 0 { Padic::exact_zero(p) } else { &base * &Padic::from_i64(k as i64, p, model.prec) };
            let f = model.f_n(n, &t)?;
            let df = model.f_n_derivative(n, &t)?;
            if df.is_zero() {
                return Err(Error::PrecisionExhausted("F_n' vanishes to working precision".into()));
            }
            let vf = if f.is_exact_zero() { i64::MAX } else { f.val() };
            Ok((vf > 2 * df.val() && vf - df.val() >= depth).then_some(t))
        })
        .collect();
    Ok(found.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionRecord {
    pub n: u32,
    pub t: Padic,
    pub val_t: i64,
    pub leading_digit: u64,
    pub order_certificate: OrderCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_trace: Option<Vec<NewtonStep>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Normalization {
    /// Every `t_n` has valuation `n - 1`.
    pub val_n_minus_1: bool,
    /// Every `t_n` lies in `p^n + p^(n+1) Z_p`.
    pub p_pow_n_leading_one: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub valuations: Vec<i64>,
    pub leading_digits: Vec<u64>,
    pub strictly_increasing: bool,
    pub orders_distinct: bool,
    /// Smallest `val(t_n - t_m)` over distinct records.
    pub min_separation_val: Option<i64>,
    pub smallest_certified_n: Option<u32>,
    pub normalization: Normalization,
}

impl Summary {
    fn of(_p: u64, records: &[TorsionRecord]) -> Self {
        let valuations: Vec<i64> = records.iter().map(|r| r.val_t).collect();
        let leading_digits: Vec<u64> = records.iter().map(|r| r.leading_digit).collect();
        let mut min_sep: Option<i64> = None;
        for (i, a) in records.iter().enumerate() {
            for b in &records[i + 1..] {
                let d = &a.t - &b.t;
                let v = if d.is_zero() { d.prec() } else { d.val() };
                min_sep = Some(min_sep.map_or(v, |m| m.min(v)));
            }
        }
        let mut orders: Vec<u64> = records.iter().map(|r| r.order_certificate.order).collect();
        orders.sort();
        orders.dedup();
        Summary {
            strictly_increasing: valuations.windows(2).all(|w| w[1] > w[0]),
            orders_distinct: orders.len() == records.len(),
            min_separation_val: min_sep,
            smallest_certified_n: records.first().map(|r| r.n),
            normalization: Normalization {
                val_n_minus_1: records.iter().all(|r| r.val_t == r.n as i64 - 1),
                p_pow_n_leading_one: records.iter().all(|r| r.val_t == r.n as i64 && r.leading_digit == 1),
            },
            valuations,
            leading_digits,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AccumulationReport {
    pub p: u64,
    pub prec: i64,
    pub series_order: i64,
    pub records: Vec<TorsionRecord>,
    pub summary: Summary,
}

impl AccumulationReport {
    pub fn without_traces(mut self) -> Self {
        for r in &mut self.records {
            r.newton_trace = None;
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairDistance {
    pub order_a: u64,
    pub order_b: u64,
    pub val: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    pub max_order: u64,
    pub disk_val: i64,
    pub depth: i64,
    pub records: Vec<ScanRecord>,
    pub distances: Vec<PairDistance>,
    /// Smallest `val(x_a - x_b)` over records of different orders; `None`
    /// stands for an infinite separation (fewer than two orders present).
    pub min_separation_val: Option<i64>,
    pub epsilon_bound_holds: bool,
    pub stable_under_rescan: bool,
    pub warnings: Vec<UnresolvedClass>,
}

fn distances(records: &[ScanRecord]) -> Vec<PairDistance> {
    let mut out = Vec::new();
    for (i, a) in records.iter().enumerate() {
        for b in &records[i + 1..] {
            if a.order == b.order {
                continue;
            }
            let d = &a.x - &b.x;
            out.push(PairDistance { order_a: a.order, order_b: b.order, val: if d.is_zero() { d.prec() } else { d.val() } });
        }
    }
    out
}

fn same_records(a: &TorsionScan, b: &TorsionScan) -> bool {
    a.records.len() == b.records.len()
        && a.records.iter().zip(&b.records).all(|(r, s)| r.order == s.order && (&r.x - &s.x).is_zero())
}

/// Torsion abscissae of a good-reduction curve in `p^disk_val Z_p`, their
/// pairwise distances across different orders, and a rescan two digits
/// deeper to confirm the record set is stable.
pub fn separation_check(e: &WeierstrassCurve, max_order: u64, disk_val: i64, depth: i64) -> Result<SeparationReport> {
    if !e.has_good_reduction() {
        return Err(Error::Domain("separation check needs good reduction (integral model, unit discriminant)".into()));
    }
    let scan = torsion_scan(e, max_order, disk_val, depth)?;
    let rescan = torsion_scan(e, max_order, disk_val, depth + 2)?;
    let dist = distances(&scan.records);
    let min_sep = dist.iter().map(|d| d.val).min();
    let min_sep_re = distances(&rescan.records).iter().map(|d| d.val).min();
    let epsilon_bound_holds = min_sep.is_none_or(|v| v <= disk_val + depth);
    let stable = same_records(&scan, &rescan) && min_sep_re == min_sep;
    Ok(SeparationReport {
        max_order,
        disk_val,
        depth,
        records: scan.records,
        distances: dist,
        min_separation_val: min_sep,
        epsilon_bound_holds,
        stable_under_rescan: stable,
        warnings: scan.unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 5;

    #[test]
    fn nodal_cubic_expansion() {
        let c = nodal_cubic();
        assert_eq!(c, vec![rat(1, 864), rat(-1, 48), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn model_invariants() {
        let m = FamilyModel::build(P, 30, 16).unwrap();
        let r = |n, d| Padic::rational(n, d, P, 30).unwrap();
        assert!((&m.a2_series().coeff(0) - &r(-1, 48)).is_zero());
        assert!((&m.a2_series().coeff(1) - &r(1, 1)).is_zero());
        assert!((&m.b2_series().coeff(0) - &r(1, 864)).is_zero());
        assert!((&m.b2_series().coeff(1) - &r(-19, 48)).is_zero());
        assert!((&m.phi_series().coeff(1) - &r(5, 16)).is_zero());
        assert!((&m.lambda_series().coeff(0) - &r(1, 1)).is_zero());
        assert!((&m.shat_series().coeff(0) - &r(5, 1)).is_zero());
    }

    #[test]
    fn section_lies_on_every_fiber() {
        let m = FamilyModel::build(P, 30, 16).unwrap();
        for t in [125, 625 * 3, 5i64.pow(6) * 7] {
            let t = Padic::from_i64(t, P, 30);
            let e = m.curve_at(&t).unwrap().smooth().unwrap();
            assert!(e.residual(&m.section()).is_zero());
        }
        assert!(matches!(m.curve_at(&Padic::exact_zero(P)).unwrap(), CurveAt::Singular(_)));
        assert!(m.curve_at(&Padic::from_i64(25, P, 30)).is_err());
    }

    #[test]
    fn shat_at_zero_is_p() {
        let m = FamilyModel::build(P, 30, 16).unwrap();
        let s = m.shat_eval(&Padic::exact_zero(P)).unwrap();
        assert!((&s.z - &Padic::from_i64(5, P, 30)).is_zero());
        assert_eq!(s.branch, 1);
    }
}
