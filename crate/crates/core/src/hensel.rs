//! Newton iteration with a quadratic-convergence certificate, and root
//! isolation for polynomials over `Z_p` by residue scan plus Hensel lifting.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{Padic, EXACT};
use crate::poly::Poly;

/// One Newton step: `val F(x_k)` and `val(x_{k+1} - x_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonStep {
    pub iteration: usize,
    pub val_residual: i64,
    pub val_step: i64,
}

pub type Evaluator<'a> = Box<dyn Fn(&Padic) -> Result<Padic> + Send + Sync + 'a>;

pub enum Derivative<'a> {
    Exact(Evaluator<'a>),
    /// Symmetric difference quotient at step `p^m`, `m` a third of the
    /// evaluation precision. Assumes `F` has integral Taylor coefficients.
    FiniteDifference,
}

pub struct NewtonProblem<'a> {
    pub eval: Evaluator<'a>,
    pub deriv: Derivative<'a>,
    pub seed: Padic,
    pub target_prec: i64,
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub root: Padic,
    pub val_f_seed: i64,
    pub val_df_seed: i64,
    pub transcript: Vec<NewtonStep>,
}

const MAX_ITER: usize = 64;

/// Residual valuation, treating an indistinguishable zero as its precision.
fn resid_val(x: &Padic) -> i64 {
    if x.is_exact_zero() {
        EXACT
    } else {
        x.val()
    }
}

pub fn finite_difference(f: &dyn Fn(&Padic) -> Result<Padic>, x: &Padic) -> Result<Padic> {
    let p = x.prime();
    let fx = f(x)?;
    let base = fx.prec().min(x.prec()).min(4096);
    let m = (base / 3).max(1);
    let h = Padic::p_power(p, m, base + m + 2);
    let up = f(&(x + &h))?;
    let down = f(&(x - &h))?;
    let q = (&up - &down).try_div(&h.mul_int(2))?;
    Ok(q.with_prec(2 * m))
}

impl NewtonProblem<'_> {
    fn derivative_at(&self, x: &Padic) -> Result<Padic> {
        match &self.deriv {
            Derivative::Exact(d) => d(x),
            Derivative::FiniteDifference => finite_difference(&*self.eval, x),
        }
    }
}

/// Newton's method from `seed`. The Hensel inequality
/// `val F(a) > 2 val F'(a)` is checked first; each step must then satisfy
/// `val F(x_{k+1}) >= 2 val F(x_k) - 2 val F'(a)` until the residual reaches
/// `target_prec`.
pub fn newton_solve(prob: &NewtonProblem<'_>) -> Result<NewtonOutcome> {
    let a = prob.seed.clone();
    let fa = (prob.eval)(&a)?;
    let dfa = prob.derivative_at(&a)?;
    if dfa.is_zero() {
        return Err(Error::HenselHypothesis { val_f: resid_val(&fa), val_df: dfa.prec() });
    }
    let d = dfa.val();
    let vf = resid_val(&fa);
    if vf <= 2 * d {
        return Err(Error::HenselHypothesis { val_f: vf, val_df: d });
    }
    let mut x = a.clone();
    let mut fx = fa;
    let mut dfx = dfa;
    let mut transcript = Vec::new();
    for iteration in 0..MAX_ITER {
        let v = resid_val(&fx);
        if v >= prob.target_prec {
            let drift = resid_val(&(&x - &a));
            if drift < vf - d {
                return Err(Error::Invariant(format!(
                    "root moved to val {drift} from the seed, below the Hensel bound {}",
                    vf - d
                )));
            }
            // the residual only pins the root down modulo p^(v - d)
            let root = if x.is_exact_zero() { x } else { x.with_prec(x.prec().min(v - d)) };
            return Ok(NewtonOutcome { root, val_f_seed: vf, val_df_seed: d, transcript });
        }
        if fx.is_zero() {
            break;
        }
        let step = fx.try_div(&dfx)?;
        let next = &x - &step;
        let fnext = (prob.eval)(&next)?;
        transcript.push(NewtonStep { iteration, val_residual: v, val_step: resid_val(&step) });
        let vn = resid_val(&fnext);
        let expected = (2 * v - 2 * d).min(prob.target_prec);
        if vn < expected && !(fnext.is_zero() && vn >= fnext.prec()) {
            return Err(Error::NewtonStalled { transcript });
        }
        x = next;
        fx = fnext;
        dfx = prob.derivative_at(&x)?;
        if dfx.is_zero() || dfx.val() != d {
            return Err(Error::NewtonStalled { transcript });
        }
    }
    if fx.is_zero() && !fx.is_exact_zero() {
        return Err(Error::PrecisionExhausted(format!(
            "residual known only modulo p^{} before reaching p^{}",
            fx.prec(),
            prob.target_prec
        )));
    }
    Err(Error::NewtonStalled { transcript })
}

/// Checks the quadratic-convergence certificate of a finished transcript.
pub fn transcript_is_quadratic(t: &[NewtonStep], val_df_seed: i64) -> bool {
    t.windows(2).all(|w| w[1].val_residual >= 2 * w[0].val_residual - 2 * val_df_seed)
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    /// Digits past the disk radius resolved by the initial exhaustive scan.
    pub depth: i64,
    /// Extra digits of subdivision allowed for classes the scan cannot decide.
    pub refine_cap: i64,
    /// Absolute precision requested for each lifted root.
    pub target_prec: i64,
}

impl ScanOptions {
    pub fn new(target_prec: i64) -> Self {
        ScanOptions { depth: 3, refine_cap: 12, target_prec }
    }
}

#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    pub root: Padic,
    /// Center and radius exponent of the residue class the root was isolated in.
    pub class_center: Padic,
    pub class_digits: i64,
    pub transcript: Vec<NewtonStep>,
}

#[derive(Debug, Clone, Default)]
pub struct RootScan {
    pub roots: Vec<IsolatedRoot>,
    /// Classes `(center, digits)` that could not be decided within the cap.
    pub unresolved: Vec<(Padic, i64)>,
}

enum ClassVerdict {
    Empty,
    Root(IsolatedRoot),
    Split,
    Unresolved,
}

/// Precision for exact auxiliary constants that never limits `f`'s digits.
fn work_prec(f: &Poly, k: i64) -> i64 {
    let deg = f.degree().unwrap_or(0) as i64;
    f.min_prec().max(1) + k * (deg + 1) + 4
}

fn examine_class(f: &Poly, c: &Padic, k: i64, opts: &ScanOptions, depth_left: i64) -> Result<ClassVerdict> {
    let p = f.prime();
    let work = work_prec(f, k);
    let scale = Padic::p_power(p, k, work);
    let shifted = f.taylor_shift(c);
    let mut b = Vec::with_capacity(shifted.coeffs().len());
    let mut pk = Padic::one(p, work);
    for t in shifted.coeffs() {
        b.push(t * &pk);
        pk = &pk * &scale;
    }
    if b.is_empty() || b.iter().all(Padic::is_zero) {
        return Ok(if depth_left > 0 { ClassVerdict::Split } else { ClassVerdict::Unresolved });
    }
    let higher_min = b.iter().skip(1).map(resid_val).min().unwrap_or(EXACT);
    let b0 = &b[0];
    if !b0.is_zero() && b0.val() < higher_min {
        return Ok(ClassVerdict::Empty);
    }
    let simple = b.len() > 1
        && !b[1].is_zero()
        && b.iter().skip(2).all(|bi| resid_val(bi) > b[1].val())
        && resid_val(b0) >= b[1].val();
    if !simple {
        return Ok(if depth_left > 0 { ClassVerdict::Split } else { ClassVerdict::Unresolved });
    }
    // Scaled problem G(u) = f(c + p^k u) / b_1 has unit derivative on Z_p.
    let b1 = b[1].clone();
    let g = Poly::new(p, b.iter().map(|bi| bi.try_div(&b1)).collect::<Result<Vec<_>>>()?);
    let dg = g.derivative();
    let u0 = -g.coeff(0);
    let target = (opts.target_prec - k).max(1);
    let (gc, dgc) = (g.clone(), dg.clone());
    let prob = NewtonProblem {
        eval: Box::new(move |u| Ok(gc.eval(u))),
        deriv: Derivative::Exact(Box::new(move |u| Ok(dgc.eval(u)))),
        seed: u0,
        target_prec: target,
    };
    let out = newton_solve(&prob)?;
    let root = c + &(&scale * &out.root);
    Ok(ClassVerdict::Root(IsolatedRoot { root, class_center: c.clone(), class_digits: k, transcript: out.transcript }))
}

fn scan_class(f: &Poly, c: Padic, k: i64, opts: &ScanOptions, depth_left: i64, out: &mut RootScan) -> Result<()> {
    match examine_class(f, &c, k, opts, depth_left)? {
        ClassVerdict::Empty => {}
        ClassVerdict::Root(r) => out.roots.push(r),
        ClassVerdict::Unresolved => out.unresolved.push((c, k)),
        ClassVerdict::Split => {
            let p = f.prime();
            let step = Padic::p_power(p, k, work_prec(f, k));
            for r in 0..p {
                let child = &c + &step.mul_int(r as i64);
                scan_class(f, child, k + 1, opts, depth_left - 1, out)?;
            }
        }
    }
    Ok(())
}

/// All simple roots of `f` in `p^disk_val Z_p`. Residue classes modulo
/// `p^(disk_val + depth)` are examined exhaustively; undecided classes are
/// subdivided one digit at a time up to `refine_cap` extra digits and then
/// reported as unresolved.
pub fn poly_roots_in_disk(f: &Poly, disk_val: i64, opts: &ScanOptions) -> Result<RootScan> {
    if disk_val < 0 {
        return Err(Error::Domain("the disk must lie in Z_p".into()));
    }
    if f.is_zero() {
        return Err(Error::Domain("polynomial vanishes to working precision".into()));
    }
    let p = f.prime();
    let k = disk_val + opts.depth;
    if k >= f.min_prec() {
        return Err(Error::PrecisionExhausted(format!(
            "scan depth p^{k} exceeds coefficient precision p^{}",
            f.min_prec()
        )));
    }
    let classes = (p as u128).pow(opts.depth as u32);
    let work = work_prec(f, k);
    let base = Padic::p_power(p, disk_val, work);
    let parts: Vec<Result<RootScan>> = (0..classes)
        .into_par_iter()
        .map(|r| {
            let c = &base * &Padic::from_bigint(&r.into(), p, work);
            let mut out = RootScan::default();
            scan_class(f, c, k, opts, opts.refine_cap, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut all = RootScan::default();
    for part in parts {
        let part = part?;
        all.roots.extend(part.roots);
        all.unresolved.extend(part.unresolved);
    }
    all.roots.sort_by_key(|r| r.root.residue_key());
    all.unresolved.sort_by_key(|(c, k)| (c.residue_key(), *k));
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    const P: u64 = 5;

    fn residue(x: &Padic, digits: u32) -> u64 {
        let m = BigUint::from(P).pow(digits);
        let v = x.with_prec(digits as i64).to_biguint().unwrap();
        (v % m).try_into().unwrap()
    }

    #[test]
    fn square_root_of_six() {
        let prob = NewtonProblem {
            eval: Box::new(|x| Ok(&x.square() - &Padic::from_i64(6, P, 30))),
            deriv: Derivative::Exact(Box::new(|x| Ok(x.mul_int(2)))),
            seed: Padic::from_i64(1, P, 30),
            target_prec: 25,
        };
        let out = newton_solve(&prob).unwrap();
        assert_eq!(residue(&out.root, 2), 16);
        assert_eq!(residue(&out.root, 1), 1);
        assert!(transcript_is_quadratic(&out.transcript, out.val_df_seed));
        assert!(resid_val(&(&out.root.square() - &Padic::from_i64(6, P, 30))) >= 25);
    }

    #[test]
    fn linear_equation_takes_one_step() {
        let c = Padic::rational(7, 3, P, 30).unwrap();
        let cc = c.clone();
        let seed = Padic::from_i64(c.digits()[0] as i64, P, 30);
        let prob = NewtonProblem {
            eval: Box::new(move |x| Ok(x - &cc)),
            deriv: Derivative::Exact(Box::new(|x| Ok(x.one_like()))),
            seed,
            target_prec: 30,
        };
        let out = newton_solve(&prob).unwrap();
        assert_eq!(out.transcript.len(), 1);
        assert!((&out.root - &c).is_zero());
    }

    #[test]
    fn finite_difference_agrees_with_exact() {
        let prob = NewtonProblem {
            eval: Box::new(|x| Ok(&(&x.pow(3) - &x.mul_int(2)) - &Padic::from_i64(6, P, 40))),
            deriv: Derivative::FiniteDifference,
            seed: Padic::from_i64(2, P, 40),
            target_prec: 12,
        };
        let d = finite_difference(&*prob.eval, &prob.seed).unwrap();
        assert!((&d - &Padic::from_i64(10, P, 40)).is_zero());
        assert!(d.prec() >= 12);
    }

    #[test]
    fn hensel_hypothesis_is_checked() {
        let prob = NewtonProblem {
            eval: Box::new(|x| Ok(&x.square() - &Padic::from_i64(6, P, 30))),
            deriv: Derivative::Exact(Box::new(|x| Ok(x.mul_int(2)))),
            seed: Padic::from_i64(2, P, 30),
            target_prec: 20,
        };
        assert!(matches!(newton_solve(&prob), Err(Error::HenselHypothesis { val_f: 0, val_df: 0 })));
    }

    #[test]
    fn scan_examples() {
        let opts = ScanOptions::new(20);
        let f = Poly::from_i64s(P, &[0, -1, 1], 30);
        let roots: Vec<u64> = poly_roots_in_disk(&f, 0, &opts).unwrap().roots.iter().map(|r| residue(&r.root, 4)).collect();
        assert_eq!(roots, vec![0, 1]);

        let f = Poly::from_i64s(P, &[-6, 0, 1], 30);
        let scan = poly_roots_in_disk(&f, 0, &opts).unwrap();
        let mut rs: Vec<u64> = scan.roots.iter().map(|r| residue(&r.root, 2)).collect();
        rs.sort();
        assert_eq!(rs, vec![9, 16]);
        assert!(scan.unresolved.is_empty());

        let f = Poly::from_i64s(P, &[-5, 0, 1], 30);
        let scan = poly_roots_in_disk(&f, 0, &opts).unwrap();
        assert!(scan.roots.is_empty() && scan.unresolved.is_empty());
    }

    #[test]
    fn double_root_is_reported_unresolved() {
        let f = Poly::from_i64s(P, &[1, -2, 1], 30);
        let opts = ScanOptions { depth: 2, refine_cap: 3, target_prec: 20 };
        let scan = poly_roots_in_disk(&f, 0, &opts).unwrap();
        assert!(scan.roots.is_empty());
        assert!(!scan.unresolved.is_empty());
        assert!(scan.unresolved.iter().all(|(c, _)| residue(c, 1) == 1));
    }
}
