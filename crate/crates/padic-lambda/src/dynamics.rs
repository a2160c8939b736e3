//! Rational dynamical systems on Q_p: evaluation, exact derivatives,
//! fixed-point finding and classification, orbit iteration, and periodic
//! points, with named constructors for each map family under study.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{rational_valuation, Norm, PAdic};
use crate::poly::{rat_int, rat_pow, QpPoly};
use crate::residue::{poly_roots_qp, InconclusiveRoot, RootSearch};

/// Degree guard for periodic-point search: the cleared polynomial of
/// f^m(x) = x has degree deg(f)^m + 1.
pub const MAX_PERIOD: usize = 3;

/// What kind of map this is; used to pick the valuation window that the
/// corresponding fixed-point norm bounds justify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MapKind {
    /// x -> ((theta x + 1)/(x + theta))^k
    IsingPotts,
    /// h -> (Moebius factor)^k from a lambda table
    LambdaTi,
    /// x -> (A x^2 + 1)/(C x^2 + 1) with |A|, |C| < 1
    SmallRhoF,
    /// u -> a (b u^2 + 1)/(u^2 + c) with a, b, c in E_p
    EpRegimeG,
    Generic,
}

/// A parametrized rational function (num/den)^outer_power on Q_p with exact
/// rational coefficients. Immutable once built.
#[derive(Debug, Clone, Serialize)]
pub struct RationalMap {
    #[serde(skip)]
    pub numerator: QpPoly,
    #[serde(skip)]
    pub denominator: QpPoly,
    pub outer_power: usize,
    pub prime: u64,
    pub precision: usize,
    pub kind: MapKind,
    /// Standing-assumption violations noted at construction time.
    pub warnings: Vec<String>,
}

/// Fixed-point taxonomy: the class is a pure function of the multiplier
/// norm: attractive below 1, neutral at 1, repelling above 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    Attractive,
    Neutral,
    Repelling,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub point: PAdic,
    pub multiplier: PAdic,
    pub multiplier_norm: Norm,
    pub class: StabilityClass,
    pub in_unit_sphere: bool,
    pub in_ep: bool,
    pub valuation: Option<i64>,
}

/// Why an orbit stopped.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitTermination {
    StepBudget,
    /// Came within p^(-tolerance) of the supplied fixed point.
    Converged { target_index: usize },
    PoleHit,
    PrecisionExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitTrace {
    pub start: PAdic,
    pub iterates: Vec<PAdic>,
    pub norms: Vec<Norm>,
    pub termination: OrbitTermination,
}

/// Outcome of a fixed-point search: classified roots plus any residue
/// clusters the root finder could not resolve.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointSearch {
    pub reports: Vec<FixedPointReport>,
    pub inconclusive: Vec<InconclusiveRoot>,
    pub window: Vec<i64>,
}

/// Valuation window selection for root searches.
#[derive(Debug, Clone)]
pub enum SearchWindow {
    /// Explicit valuations to scan.
    Valuations(Vec<i64>),
    /// Inclusive interval of valuations.
    Interval(i64, i64),
    /// Named-regime window when the map kind supplies norm bounds,
    /// otherwise the Newton polygon of the cleared polynomial.
    Auto,
}

fn check_rho(rho: &BigRational) -> Result<()> {
    if rho.is_zero() || rho == &BigRational::one() || rho == &(-BigRational::one()) {
        return Err(Error::BadParameter("rho must avoid {-1, 0, 1}".to_string()));
    }
    Ok(())
}

/// Interaction exponents beyond this produce astronomically large exact
/// rationals; reject them up front.
pub const MAX_INTERACTION_EXPONENT: i64 = 1 << 16;

fn check_exponent(e: i64) -> Result<()> {
    if e.abs() > MAX_INTERACTION_EXPONENT {
        return Err(Error::BadParameter(format!(
            "interaction exponent {e} exceeds the bound {MAX_INTERACTION_EXPONENT}"
        )));
    }
    Ok(())
}

impl RationalMap {
    /// The Ising-Potts mapping x -> ((theta x + 1)/(x + theta))^k with
    /// theta = rho^(2N), computed exactly.
    pub fn ising_potts(
        prime: u64,
        k: usize,
        rho: &BigRational,
        n_coupling: i64,
        precision: usize,
    ) -> Result<RationalMap> {
        check_rho(rho)?;
        check_exponent(2 * n_coupling)?;
        if k < 1 {
            return Err(Error::BadParameter("outer power k must be >= 1".into()));
        }
        let theta = rat_pow(rho, 2 * n_coupling);
        let numerator = QpPoly::new(vec![rat_int(1), theta.clone()]);
        let denominator = QpPoly::new(vec![theta, rat_int(1)]);
        Ok(RationalMap {
            numerator,
            denominator,
            outer_power: k,
            prime,
            precision,
            kind: MapKind::IsingPotts,
            warnings: vec![],
        })
    }

    /// The translation-invariant recurrence map of a general lambda table:
    /// F(h) = ((rho^l11 h + rho^l1m)/(rho^lm1 h + rho^lmm))^k,
    /// with the table given as [l(1,1), l(1,-1), l(-1,1), l(-1,-1)].
    pub fn lambda_ti(
        prime: u64,
        k: usize,
        rho: &BigRational,
        lambda: [i64; 4],
        precision: usize,
    ) -> Result<RationalMap> {
        check_rho(rho)?;
        if k < 1 {
            return Err(Error::BadParameter("outer power k must be >= 1".into()));
        }
        let [l11, l1m, lm1, lmm] = lambda;
        for e in lambda {
            check_exponent(e)?;
        }
        let a = rat_pow(rho, l11);
        let b = rat_pow(rho, l1m);
        let c = rat_pow(rho, lm1);
        let d = rat_pow(rho, lmm);
        let mut warnings = vec![];
        if l11 == lm1 && l1m == lmm {
            warnings.push("identical Moebius rows: the map is constant 1".to_string());
        }
        Ok(RationalMap {
            numerator: QpPoly::new(vec![b, a]),
            denominator: QpPoly::new(vec![d, c]),
            outer_power: k,
            prime,
            precision,
            kind: MapKind::LambdaTi,
            warnings,
        })
    }

    /// The small-rho regime map f(x) = (A x^2 + 1)/(C x^2 + 1).
    /// Standing assumptions |A|_p, |C|_p < 1 and |A|_p != |C|_p are checked
    /// and reported as warnings, not errors.
    pub fn small_rho_f(
        prime: u64,
        a: &BigRational,
        c: &BigRational,
        precision: usize,
    ) -> Result<RationalMap> {
        if a.is_zero() || c.is_zero() {
            return Err(Error::BadParameter("A and C must be nonzero".into()));
        }
        let va = rational_valuation(a, prime).unwrap();
        let vc = rational_valuation(c, prime).unwrap();
        let mut warnings = vec![];
        if va <= 0 || vc <= 0 {
            warnings.push(format!(
                "standing assumption |A|_p, |C|_p < 1 violated (valuations {va}, {vc})"
            ));
        }
        if a == c {
            warnings.push("A = C: the map is constant 1".to_string());
        } else if va == vc {
            warnings.push("|A|_p = |C|_p: fixed-point norm bounds do not apply".to_string());
        }
        Ok(RationalMap {
            numerator: QpPoly::new(vec![rat_int(1), rat_int(0), a.clone()]),
            denominator: QpPoly::new(vec![rat_int(1), rat_int(0), c.clone()]),
            outer_power: 1,
            prime,
            precision,
            kind: MapKind::SmallRhoF,
            warnings,
        })
    }

    /// The E_p regime map g(u) = a (b u^2 + 1)/(u^2 + c).
    /// Standing assumptions a, b, c in E_p and |b-1|_p + |c-1|_p != 0 are
    /// checked and reported as warnings, not errors.
    pub fn ep_regime_g(
        prime: u64,
        a: &BigRational,
        b: &BigRational,
        c: &BigRational,
        precision: usize,
    ) -> Result<RationalMap> {
        let mut warnings = vec![];
        for (name, x) in [("a", a), ("b", b), ("c", c)] {
            let in_ep = PAdic::from_rational(x, prime, precision)?.in_ep();
            if !in_ep {
                warnings.push(format!("{name} is not in E_p"));
            }
        }
        if b.is_one() && c.is_one() {
            warnings.push("|b-1|_p + |c-1|_p = 0: the equation is trivial (unique measure)".into());
        }
        Ok(RationalMap {
            numerator: QpPoly::new(vec![a.clone(), rat_int(0), a * b]),
            denominator: QpPoly::new(vec![c.clone(), rat_int(0), rat_int(1)]),
            outer_power: 1,
            prime,
            precision,
            kind: MapKind::EpRegimeG,
            warnings,
        })
    }

    /// theta = rho^(2N) for an Ising-Potts map (the coefficient of x in the
    /// numerator).
    pub fn theta(&self) -> BigRational {
        self.numerator.coeff(1)
    }

    /// Evaluate the map at a p-adic point.
    pub fn evaluate(&self, x: &PAdic) -> Result<PAdic> {
        assert_eq!(x.prime(), self.prime);
        let den = self.denominator.eval_padic(x)?;
        if den.is_zero() {
            return Err(Error::PoleHit);
        }
        let num = self.numerator.eval_padic(x)?;
        num.div(&den)?.pow_int(self.outer_power as i64)
    }

    /// Exact evaluation on a rational point; `None` at a pole.
    pub fn evaluate_rational(&self, x: &BigRational) -> Option<BigRational> {
        let den = self.denominator.eval_rational(x);
        if den.is_zero() {
            return None;
        }
        let num = self.numerator.eval_rational(x);
        Some(rat_pow(&(num / den), self.outer_power as i64))
    }

    /// Derivative at a point via the closed-form quotient/power rule applied
    /// to the coefficient polynomials:
    /// d/dx (N/D)^k = k (N/D)^(k-1) (N'D - ND')/D^2.
    pub fn derivative_at(&self, x: &PAdic) -> Result<PAdic> {
        assert_eq!(x.prime(), self.prime);
        let den = self.denominator.eval_padic(x)?;
        if den.is_zero() {
            return Err(Error::PoleHit);
        }
        let num = self.numerator.eval_padic(x)?;
        let dn = self.numerator.derivative().eval_padic(x)?;
        let dd = self.denominator.derivative().eval_padic(x)?;
        // N'D - ND'
        let cross = match dn.mul(&den).sub(&num.mul(&dd)) {
            Ok(v) => v,
            Err(Error::PrecisionExhausted(_)) => PAdic::zero(self.prime, x.precision()),
            Err(e) => return Err(e),
        };
        let k = PAdic::from_integer(self.outer_power as i64, self.prime, x.precision())?;
        let ratio_pow = num.div(&den)?.pow_int(self.outer_power as i64 - 1)?;
        k.mul(&ratio_pow).mul(&cross).div(&den.mul(&den))
    }

    /// The fixed-point equation cleared to a polynomial:
    /// N(x)^k - x * D(x)^k.
    pub fn fixed_point_poly(&self) -> QpPoly {
        let nk = self.numerator.pow(self.outer_power);
        let dk = self.denominator.pow(self.outer_power);
        nk.sub(&QpPoly::x().mul(&dk))
    }

    /// The valuation window justified for this map's fixed points:
    /// Ising-Potts uses the norm statements (Fix inside Z_p^* when
    /// |theta| <= 1, inside the union of theta^(k t) Z_p^* otherwise);
    /// the small-rho f uses {0} and the fixed-point norm exponents; g and
    /// generic maps fall back to the Newton polygon of the cleared equation.
    pub fn named_window(&self) -> Vec<i64> {
        let p = self.prime;
        let mut w = match &self.kind {
            MapKind::IsingPotts => {
                let vt = rational_valuation(&self.theta(), p).unwrap_or(0);
                if vt >= 0 {
                    vec![0]
                } else {
                    let k = self.outer_power as i64;
                    vec![k * vt, 0, -k * vt]
                }
            }
            MapKind::SmallRhoF => {
                let va = rational_valuation(&self.numerator.coeff(2), p).unwrap_or(0);
                let vc = rational_valuation(&self.denominator.coeff(2), p).unwrap_or(0);
                let mut w = vec![0, va - vc, vc - va, -va, va];
                if vc % 2 == 0 {
                    w.push(-vc / 2);
                    w.push(vc / 2);
                }
                w
            }
            _ => self.fixed_point_poly().newton_polygon_valuations(p),
        };
        w.sort_unstable();
        w.dedup();
        w
    }

    /// All fixed points within the window, each classified. Zeros of the
    /// denominator are excluded. Non-simple residue clusters the root finder
    /// could not split are reported as inconclusive entries.
    pub fn fixed_points(&self, search: &SearchWindow) -> Result<FixedPointSearch> {
        let window = match search {
            SearchWindow::Valuations(v) => v.clone(),
            SearchWindow::Interval(lo, hi) => (*lo..=*hi).collect(),
            SearchWindow::Auto => self.named_window(),
        };
        let cleared = self.fixed_point_poly();
        let RootSearch {
            roots,
            inconclusive,
        } = poly_roots_qp(&cleared, &window, self.prime, self.precision)?;
        let mut reports = Vec::new();
        for root in roots {
            let den = self.denominator.eval_padic(&root)?;
            if den.is_zero() {
                continue;
            }
            reports.push(self.classify_fixed_point(&root)?);
        }
        Ok(FixedPointSearch {
            reports,
            inconclusive,
            window,
        })
    }

    /// Classify a fixed point by its multiplier norm. Errors with
    /// [`Error::NotFixed`] when |f(x) - x|_p exceeds p^(-precision/2).
    pub fn classify_fixed_point(&self, x: &PAdic) -> Result<FixedPointReport> {
        let tolerance = (self.precision / 2) as i64;
        let fx = self.evaluate(x)?;
        if !fx.congruent_mod(x, tolerance) {
            let exp = match fx.sub(x) {
                Ok(v) => -v.valuation().unwrap(),
                Err(_) => unreachable!("congruence failed so digits differ"),
            };
            return Err(Error::NotFixed {
                norm_exponent: exp,
                tolerance,
            });
        }
        let multiplier = self.derivative_at(x)?;
        let norm = multiplier.norm();
        let class = match norm.exponent() {
            None => StabilityClass::Attractive, // multiplier 0
            Some(v) if v > 0 => StabilityClass::Attractive,
            Some(0) => StabilityClass::Neutral,
            Some(_) => StabilityClass::Repelling,
        };
        Ok(FixedPointReport {
            valuation: x.valuation(),
            in_unit_sphere: x.in_unit_sphere(),
            in_ep: x.in_ep(),
            point: x.clone(),
            multiplier,
            multiplier_norm: norm,
            class,
        })
    }

    /// Iterate the map from `start` until the step budget runs out, the
    /// orbit comes within p^(-stop_tolerance) of one of `targets`, a pole is
    /// hit, or precision is lost.
    pub fn iterate_orbit(
        &self,
        start: &PAdic,
        max_steps: usize,
        stop_tolerance: i64,
        targets: &[PAdic],
    ) -> OrbitTrace {
        let mut iterates = vec![start.clone()];
        let mut norms = vec![start.norm()];
        let mut x = start.clone();
        let mut termination = OrbitTermination::StepBudget;
        for _ in 0..max_steps {
            match self.evaluate(&x) {
                Ok(next) => {
                    norms.push(next.norm());
                    iterates.push(next.clone());
                    x = next;
                }
                Err(Error::PoleHit) => {
                    termination = OrbitTermination::PoleHit;
                    break;
                }
                Err(_) => {
                    termination = OrbitTermination::PrecisionExhausted;
                    break;
                }
            }
            if let Some(idx) = targets
                .iter()
                .position(|t| x.congruent_mod(t, stop_tolerance + 1))
            {
                termination = OrbitTermination::Converged { target_index: idx };
                break;
            }
        }
        OrbitTrace {
            start: start.clone(),
            iterates,
            norms,
            termination,
        }
    }

    /// The m-fold composition as a polynomial pair (numerator, denominator)
    /// with exact rational coefficients.
    pub fn iterate_poly_pair(&self, m: usize) -> (QpPoly, QpPoly) {
        let base_num = self.numerator.pow(self.outer_power);
        let base_den = self.denominator.pow(self.outer_power);
        let mut num = base_num.clone();
        let mut den = base_den.clone();
        for _ in 1..m {
            let new_num = base_num.compose_rational_function(&num, &den);
            let new_den = base_den.compose_rational_function(&num, &den);
            num = new_num;
            den = new_den;
        }
        (num, den)
    }

    /// Roots of the cleared equation f^m(x) = x within the window (period
    /// divides m), denominator zeros excluded.
    pub fn points_of_period_dividing(
        &self,
        m: usize,
        search: &SearchWindow,
    ) -> Result<Vec<PAdic>> {
        if m == 0 || m > MAX_PERIOD {
            return Err(Error::EnumerationGuard(format!(
                "period must be in 1..={MAX_PERIOD}"
            )));
        }
        let (num, den) = self.iterate_poly_pair(m);
        let cleared = num.sub(&QpPoly::x().mul(&den));
        let window = match search {
            SearchWindow::Valuations(v) => v.clone(),
            SearchWindow::Interval(lo, hi) => (*lo..=*hi).collect(),
            SearchWindow::Auto => {
                let mut w = cleared.newton_polygon_valuations(self.prime);
                for v in self.named_window() {
                    if !w.contains(&v) {
                        w.push(v);
                    }
                }
                w.sort_unstable();
                w
            }
        };
        let found = poly_roots_qp(&cleared, &window, self.prime, self.precision)?;
        let mut pts = Vec::new();
        for root in found.roots {
            if self.denominator.eval_padic(&root)?.is_zero() {
                continue;
            }
            pts.push(root);
        }
        Ok(pts)
    }

    /// Points of exact period m (divisor periods filtered out), grouped
    /// into cycles in orbit order. `m` is capped at [`MAX_PERIOD`].
    pub fn periodic_points(&self, m: usize, search: &SearchWindow) -> Result<Vec<Vec<PAdic>>> {
        let pts = self.points_of_period_dividing(m, search)?;
        let tolerance = (self.precision / 2) as i64;
        // drop points whose exact period strictly divides m
        let mut exact: Vec<PAdic> = Vec::new();
        'point: for x in pts {
            for d in 1..m {
                if m.is_multiple_of(d) {
                    let mut y = x.clone();
                    for _ in 0..d {
                        y = self.evaluate(&y)?;
                    }
                    if y.congruent_mod(&x, tolerance) {
                        continue 'point;
                    }
                }
            }
            exact.push(x);
        }
        // group into cycles by following orbits
        let mut cycles: Vec<Vec<PAdic>> = Vec::new();
        let mut used = vec![false; exact.len()];
        for i in 0..exact.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let mut cycle = vec![exact[i].clone()];
            let mut y = exact[i].clone();
            for _ in 1..m {
                y = self.evaluate(&y)?;
                for (j, z) in exact.iter().enumerate() {
                    if !used[j] && z.congruent_mod(&y, tolerance) {
                        used[j] = true;
                    }
                }
                cycle.push(y.clone());
            }
            cycles.push(cycle);
        }
        Ok(cycles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    const PREC: usize = 48;

    fn ising(p: u64, k: usize, num: i64, den: i64, n: i64) -> RationalMap {
        RationalMap::ising_potts(p, k, &rat(num, den), n, PREC).unwrap()
    }

    #[test]
    fn ising_construction() {
        let m = ising(5, 2, 1, 5, 1);
        assert_eq!(m.theta(), rat(1, 25));
        assert_eq!(m.outer_power, 2);
        // f(1) = 1 for any theta != -1
        let one = PAdic::one(5, PREC);
        let f1 = m.evaluate(&one).unwrap();
        assert!(f1.congruent_mod(&one, PREC as i64));
        // theta = 36 for rho = 6: theta in E_5
        let m2 = ising(5, 2, 6, 1, 1);
        assert!(PAdic::from_rational(&m2.theta(), 5, PREC).unwrap().in_ep());
    }

    #[test]
    fn ising_rejects_bad_rho() {
        for bad in [rat(0, 1), rat(1, 1), rat(-1, 1)] {
            assert!(RationalMap::ising_potts(5, 2, &bad, 1, PREC).is_err());
        }
    }

    #[test]
    fn lambda_ti_symmetry_and_degenerate() {
        // lambda(1,1) = lambda(-1,-1), lambda(1,-1) = lambda(-1,1): F(1) = 1
        let m = RationalMap::lambda_ti(5, 2, &rat(6, 1), [1, -1, -1, 1], PREC).unwrap();
        let one = PAdic::one(5, PREC);
        assert!(m.evaluate(&one).unwrap().congruent_mod(&one, PREC as i64));
        // degenerate rows produce the constant-map warning
        let d = RationalMap::lambda_ti(5, 2, &rat(6, 1), [2, 3, 2, 3], PREC).unwrap();
        assert!(!d.warnings.is_empty());
    }

    #[test]
    fn lambda_ti_matches_ising() {
        // lambda(u,v) = N u v reproduces the Ising-Potts map exactly
        let ising_map = ising(5, 3, 6, 1, 2);
        let lam = RationalMap::lambda_ti(5, 3, &rat(6, 1), [2, -2, -2, 2], PREC).unwrap();
        let x = PAdic::parse_rational(7, 2, 5, PREC).unwrap();
        let a = ising_map.evaluate(&x).unwrap();
        let b = lam.evaluate(&x).unwrap();
        assert!(a.congruent_mod(&b, (PREC - 8) as i64));
    }

    #[test]
    fn small_rho_f_warnings() {
        // A = C triggers the constant-map warning
        let w = RationalMap::small_rho_f(5, &rat(5, 1), &rat(5, 1), PREC).unwrap();
        assert!(w.warnings.iter().any(|s| s.contains("constant")));
        // |A| >= 1 violates the standing assumption
        let w2 = RationalMap::small_rho_f(5, &rat(1, 5), &rat(25, 1), PREC).unwrap();
        assert!(!w2.warnings.is_empty());
        // f(1) = (A+1)/(C+1) is a unit when |A|, |C| < 1
        let f = RationalMap::small_rho_f(5, &rat(5, 1), &rat(125, 1), PREC).unwrap();
        assert!(f.warnings.is_empty());
        let y = f.evaluate(&PAdic::one(5, PREC)).unwrap();
        assert_eq!(y.norm(), Norm::one());
    }

    #[test]
    fn ep_g_warnings() {
        // a = b = c = 1 violates |b-1| + |c-1| != 0
        let g = RationalMap::ep_regime_g(5, &rat(1, 1), &rat(1, 1), &rat(1, 1), PREC).unwrap();
        assert!(g.warnings.iter().any(|s| s.contains("trivial")));
        let ok = RationalMap::ep_regime_g(5, &rat(6, 1), &rat(6, 1), &rat(216, 1), PREC).unwrap();
        assert!(ok.warnings.is_empty());
    }

    #[test]
    fn identity_map_derivative() {
        let id = RationalMap {
            numerator: QpPoly::x(),
            denominator: QpPoly::new(vec![rat_int(1)]),
            outer_power: 1,
            prime: 5,
            precision: PREC,
            kind: MapKind::Generic,
            warnings: vec![],
        };
        let x = PAdic::parse_rational(42, 11, 5, PREC).unwrap();
        let d = id.derivative_at(&x).unwrap();
        assert!(d.congruent_mod(&PAdic::one(5, PREC), PREC as i64));
    }

    #[test]
    fn ising_derivative_at_one() {
        // closed form: f'(1) = k (theta - 1)/(theta + 1)
        let m = ising(5, 2, 6, 1, 1);
        let one = PAdic::one(5, PREC);
        let d = m.derivative_at(&one).unwrap();
        let theta = m.theta();
        let expect = rat_int(2) * (&theta - rat_int(1)) / (&theta + rat_int(1));
        let e = PAdic::from_rational(&expect, 5, PREC).unwrap();
        assert!(d.congruent_mod(&e, (PREC - 8) as i64));
        // rho in E_5: |f'(1)| < 1, so x = 1 attracts
        assert_eq!(d.norm(), Norm::Exp(1));
    }

    #[test]
    fn derivative_first_order_taylor() {
        // |f(x+eps) - f(x) - f'(x) eps| <= |eps|^2-scale, ultrametrically
        let m = ising(5, 2, 6, 1, 1);
        let x = PAdic::parse_rational(3, 1, 5, PREC).unwrap();
        let eps = PAdic::parse_rational(25, 1, 5, PREC).unwrap();
        let fx = m.evaluate(&x).unwrap();
        let xe = x.add(&eps).unwrap();
        let fxe = m.evaluate(&xe).unwrap();
        let lin = m.derivative_at(&x).unwrap().mul(&eps);
        match fxe.sub(&fx).unwrap().sub(&lin) {
            Ok(r) => assert!(r.valuation().unwrap() >= 2 * eps.valuation().unwrap()),
            Err(_) => {} // cancelled to working precision: even better
        }
    }

    #[test]
    fn ising_fixed_points_large_theta() {
        // p=5, k=2, rho=1/5: the cleared cubic has exactly three roots in
        // Q_5, at valuations -4, 0, 4 (the middle one is x = 1)
        let m = ising(5, 2, 1, 5, 1);
        let found = m.fixed_points(&SearchWindow::Auto).unwrap();
        assert_eq!(found.window, vec![-4, 0, 4]);
        assert_eq!(found.reports.len(), 3);
        let vals: Vec<i64> = found.reports.iter().map(|r| r.valuation.unwrap()).collect();
        assert_eq!(vals, vec![-4, 0, 4]);
        assert!(found.reports[1]
            .point
            .congruent_mod(&PAdic::one(5, PREC), PREC as i64));
        assert!(found.inconclusive.is_empty());
    }

    #[test]
    fn ising_fixed_points_k3() {
        // p=5, k=3, rho=1/5: four fixed points, at valuations -6, 0, 0, 6;
        // the extra unit root is exactly -1 (k odd)
        let m = ising(5, 3, 1, 5, 1);
        let found = m.fixed_points(&SearchWindow::Auto).unwrap();
        assert_eq!(found.reports.len(), 4);
        let vals: Vec<i64> = found.reports.iter().map(|r| r.valuation.unwrap()).collect();
        assert_eq!(vals, vec![-6, 0, 0, 6]);
        let minus_one = PAdic::from_integer(-1, 5, PREC).unwrap();
        assert!(found
            .reports
            .iter()
            .any(|r| r.point.congruent_mod(&minus_one, PREC as i64)));
    }

    #[test]
    fn ising_ep_fixed_points_classified() {
        // rho = 6 in E_5: x = 1 attractive, two repelling points near -1
        let m = ising(5, 2, 6, 1, 1);
        let found = m.fixed_points(&SearchWindow::Auto).unwrap();
        assert_eq!(found.reports.len(), 3);
        let one = PAdic::one(5, PREC);
        for r in &found.reports {
            if r.point.congruent_mod(&one, 4) {
                assert_eq!(r.class, StabilityClass::Attractive);
                assert!(r.in_ep);
            } else {
                assert_eq!(r.class, StabilityClass::Repelling);
                assert!(r.in_unit_sphere);
            }
        }
    }

    #[test]
    fn classify_rejects_non_fixed() {
        let m = ising(5, 2, 6, 1, 1);
        let x = PAdic::parse_rational(2, 1, 5, PREC).unwrap();
        assert!(matches!(
            m.classify_fixed_point(&x),
            Err(Error::NotFixed { .. })
        ));
    }

    #[test]
    fn g_fixed_points_depend_on_p_mod_4() {
        // 3 fixed points at p=5 (p ≡ 1 mod 4), 1 at p=7 (p ≡ 3 mod 4)
        let g5 = RationalMap::ep_regime_g(5, &rat(6, 1), &rat(6, 1), &rat(216, 1), PREC).unwrap();
        assert_eq!(
            g5.fixed_points(&SearchWindow::Auto).unwrap().reports.len(),
            3
        );
        let g7 = RationalMap::ep_regime_g(7, &rat(8, 1), &rat(8, 1), &rat(512, 1), PREC).unwrap();
        assert_eq!(
            g7.fixed_points(&SearchWindow::Auto).unwrap().reports.len(),
            1
        );
    }

    #[test]
    fn small_rho_f_norm_patterns() {
        // |A|^2 > |C| (A = 5, C = 125): norms (1, |A|/|C|, 1/|A|) and
        // classes (attractive, attractive, neutral)
        let f = RationalMap::small_rho_f(5, &rat(5, 1), &rat(125, 1), PREC).unwrap();
        let found = f.fixed_points(&SearchWindow::Auto).unwrap();
        assert_eq!(found.reports.len(), 3);
        let mut summary: Vec<(i64, StabilityClass)> = found
            .reports
            .iter()
            .map(|r| (r.valuation.unwrap(), r.class))
            .collect();
        summary.sort_by_key(|s| s.0);
        assert_eq!(
            summary,
            vec![
                (-2, StabilityClass::Attractive), // |x1| = 25 = |A|/|C|
                (-1, StabilityClass::Neutral),    // |x2| = 5 = 1/|A|
                (0, StabilityClass::Attractive),  // x0 in E_p
            ]
        );
        // |A|^2 < |C| (A = 125, C = 625): repelling pair at |x| = 1/sqrt|C|
        let f2 = RationalMap::small_rho_f(5, &rat(125, 1), &rat(625, 1), PREC).unwrap();
        let found2 = f2.fixed_points(&SearchWindow::Auto).unwrap();
        assert_eq!(found2.reports.len(), 3);
        for r in &found2.reports {
            if r.valuation.unwrap() == -2 {
                assert_eq!(r.class, StabilityClass::Repelling);
            }
        }
    }

    #[test]
    fn orbit_at_fixed_point_is_constant() {
        let m = ising(5, 2, 6, 1, 1);
        let one = PAdic::one(5, PREC);
        let trace = m.iterate_orbit(&one, 5, 10, &[]);
        assert_eq!(trace.termination, OrbitTermination::StepBudget);
        for it in &trace.iterates {
            assert!(it.congruent_mod(&one, 40));
        }
    }

    #[test]
    fn orbit_converges_to_attractor_in_ep() {
        let m = ising(5, 2, 6, 1, 1);
        let start = PAdic::parse_rational(11, 1, 5, PREC).unwrap(); // 11 ≡ 1 mod 5
        let one = PAdic::one(5, PREC);
        let trace = m.iterate_orbit(&start, 60, 20, std::slice::from_ref(&one));
        assert!(matches!(
            trace.termination,
            OrbitTermination::Converged { target_index: 0 }
        ));
    }

    #[test]
    fn orbit_leaves_repelling_neighborhood() {
        let m = ising(5, 2, 6, 1, 1);
        let found = m.fixed_points(&SearchWindow::Auto).unwrap();
        let rep = found
            .reports
            .iter()
            .find(|r| r.class == StabilityClass::Repelling)
            .unwrap()
            .point
            .clone();
        // start close to the repelling point but not on it
        let offset = PAdic::parse_rational(5i64.pow(6), 1, 5, PREC).unwrap();
        let mut x = rep.add(&offset).unwrap();
        let mut last = x.sub(&rep).unwrap().valuation().unwrap();
        for _ in 0..3 {
            x = m.evaluate(&x).unwrap();
            let d = x.sub(&rep).unwrap().valuation().unwrap();
            assert!(d < last, "distance must strictly increase");
            last = d;
        }
    }

    #[test]
    fn periodic_points_m1_matches_fixed_points() {
        let m = ising(5, 2, 6, 1, 1);
        let cycles = m.periodic_points(1, &SearchWindow::Auto).unwrap();
        assert_eq!(cycles.len(), 3);
        for c in &cycles {
            assert_eq!(c.len(), 1);
        }
    }

    #[test]
    fn full_shift_period_counts() {
        // Theorem-of-the-repeller regime: points of period dividing m inside
        // X number 2^m; exact-period-2 count is 2^2 - 2 = 2
        let m = ising(5, 2, 6, 1, 1);
        let pts1 = m.points_of_period_dividing(1, &SearchWindow::Auto).unwrap();
        assert_eq!(pts1.len(), 3); // 1 attractor + 2 in the repeller
        let pts2 = m.points_of_period_dividing(2, &SearchWindow::Auto).unwrap();
        assert_eq!(pts2.len(), 5); // 1 + 2 fixed + 2 of exact period 2
        let cycles2 = m.periodic_points(2, &SearchWindow::Auto).unwrap();
        let total: usize = cycles2.iter().map(|c| c.len()).sum();
        assert_eq!(total, 2);
        assert_eq!(cycles2.len(), 1);
        // the 2-cycle alternates under f
        let c = &cycles2[0];
        let fw = m.evaluate(&c[0]).unwrap();
        assert!(fw.congruent_mod(&c[1], 20));
        let back = m.evaluate(&c[1]).unwrap();
        assert!(back.congruent_mod(&c[0], 20));
    }

    #[test]
    fn period_guard() {
        let m = ising(5, 2, 6, 1, 1);
        assert!(m.periodic_points(4, &SearchWindow::Auto).is_err());
    }
}
