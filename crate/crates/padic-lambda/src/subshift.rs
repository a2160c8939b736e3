//! Weak-repeller data for a map and a ball cover: scaling exponents tau_j,
//! the incidence matrix and its irreducibility, finite-depth Julia-set
//! membership via itineraries, the dynamical metric d_f, and the
//! periodic-point count witness for conjugacy to the shift.
//!
//! The specialized constructor builds the repeller of the Ising-Potts map
//! in the regime where the dynamics on it is conjugate to the full shift:
//! centers x_i = -1 + (theta - 1) eta_i over Sol_p(x^k + 1), covered by
//! balls |x - x_i| <= |p (theta - 1)|_p. Those closed balls are realized as
//! open balls of radius exponent -v(theta - 1), which is exact because all
//! norms are integer powers of p.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{RationalMap, SearchWindow};
use crate::error::{Error, Result};
use crate::padic::{rational_valuation, Norm, PAdic, PAdicBall};
use crate::poly::{rat_int, rat_pow};
use crate::residue::kth_roots_of_minus_one_mod_p;

pub const DEFAULT_SCALING_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepellerClass {
    /// All scaling exponents positive.
    Repeller,
    /// All nonnegative, at least one positive.
    WeakRepeller,
    Neither,
}

/// A sampled pair violating the exact scaling law, kept as evidence.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingWitness {
    pub ball_index: usize,
    pub expected_exponent: i64,
    pub observed_exponent: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepellerSetup {
    #[serde(skip)]
    pub map: RationalMap,
    pub balls: Vec<PAdicBall>,
    /// tau_j: |f(x) - f(y)|_p = p^tau_j |x - y|_p on ball j.
    pub scaling_exponents: Vec<i64>,
    pub repeller_class: RepellerClass,
    /// Whether the scaling law was verified by exact sampling.
    pub scaling_verified: bool,
    pub scaling_witness: Option<ScalingWitness>,
    /// kappa[i][j]: |a_i - a_j|_p = p^(-kappa(i,j)) for i != j.
    pub kappa: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncidenceMatrix {
    pub entries: Vec<Vec<bool>>,
    pub irreducible: bool,
}

impl IncidenceMatrix {
    pub fn trace_of_power(&self, m: usize) -> u64 {
        let n = self.entries.len();
        let mut acc: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| self.entries[i][j] as u64).collect())
            .collect();
        for _ in 1..m {
            let mut next = vec![vec![0u64; n]; n];
            #[allow(clippy::needless_range_loop)]
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        next[i][j] += acc[i][l] * self.entries[l][j] as u64;
                    }
                }
            }
            acc = next;
        }
        (0..n).map(|i| acc[i][i]).sum()
    }
}

/// Finite symbol itinerary of a point through the ball cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolSequence {
    pub symbols: Vec<usize>,
    /// First step at which the orbit left the cover, if it did.
    pub escape_step: Option<usize>,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<usize>) -> SymbolSequence {
        SymbolSequence {
            symbols,
            escape_step: None,
        }
    }
}

impl RepellerSetup {
    /// Assemble a setup from a map and a disjoint equal-radius ball cover;
    /// scaling exponents are computed analytically from the derivative
    /// valuation at each center (verification is a separate step).
    pub fn new(map: RationalMap, balls: Vec<PAdicBall>) -> Result<RepellerSetup> {
        if balls.is_empty() {
            return Err(Error::BadParameter("at least one ball required".into()));
        }
        let e = balls[0].radius_exponent;
        if balls.iter().any(|b| b.radius_exponent != e) {
            return Err(Error::BadParameter("balls must share one radius".into()));
        }
        // pairwise distances; disjointness means kappa(i,j) <= -e, which is
        // exactly the kappa(i,j) < -log_p(r) requirement for the metric
        let n = balls.len();
        let mut kappa = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = balls[i]
                    .center
                    .sub(&balls[j].center)
                    .map_err(|_| Error::BadParameter("ball centers coincide".into()))?;
                let k = d.valuation().expect("nonzero difference");
                if k > -e {
                    return Err(Error::BadParameter(format!(
                        "balls {i} and {j} are not disjoint"
                    )));
                }
                kappa[i][j] = k;
            }
        }
        let mut scaling = Vec::with_capacity(n);
        for b in &balls {
            let d = map.derivative_at(&b.center)?;
            let tau = match d.valuation() {
                Some(v) => -v,
                None => {
                    return Err(Error::BadParameter(
                        "derivative vanishes at a ball center".into(),
                    ))
                }
            };
            scaling.push(tau);
        }
        let class = classify_taus(&scaling);
        Ok(RepellerSetup {
            map,
            balls,
            scaling_exponents: scaling,
            repeller_class: class,
            scaling_verified: false,
            scaling_witness: None,
            kappa,
        })
    }

    /// The open-ball radius exponent shared by the cover.
    pub fn radius_exponent(&self) -> i64 {
        self.balls[0].radius_exponent
    }

    pub fn ball_index_of(&self, x: &PAdic) -> Option<usize> {
        self.balls.iter().position(|b| b.contains(x))
    }

    /// Verify the exact scaling law |f(x) - f(y)|_p = p^tau_j |x - y|_p on
    /// `sample_count` random pairs per ball. Any violation downgrades the
    /// class to Neither and stores a witness. Deterministic given the seed.
    pub fn verify_scaling(&mut self, sample_count: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = self.radius_exponent();
        let p = self.map.prime;
        let prec = self.map.precision;
        let step = rat_pow(&BigRational::from_integer((p as i64).into()), 1 - e);
        for (j, ball) in self.balls.iter().enumerate() {
            let tau = self.scaling_exponents[j];
            let mut done = 0usize;
            while done < sample_count {
                let t1: u64 = rng.gen_range(0..1u64 << 40);
                let t2: u64 = rng.gen_range(0..1u64 << 40);
                if t1 == t2 {
                    continue;
                }
                let mk = |t: u64| -> Result<PAdic> {
                    let off = PAdic::from_rational(
                        &(&step * rat_int(t as i64)),
                        p,
                        prec,
                    )?;
                    ball.center.add(&off)
                };
                let x = mk(t1)?;
                let y = mk(t2)?;
                let dx = match x.sub(&y) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                let observed = (|| -> Result<Option<i64>> {
                    let fx = self.map.evaluate(&x)?;
                    let fy = self.map.evaluate(&y)?;
                    match fx.sub(&fy) {
                        Ok(d) => Ok(d.valuation()),
                        Err(_) => Ok(None),
                    }
                })();
                let expected = dx.valuation().unwrap() - tau;
                let ok = matches!(&observed, Ok(Some(v)) if *v == expected);
                if !ok {
                    self.repeller_class = RepellerClass::Neither;
                    self.scaling_witness = Some(ScalingWitness {
                        ball_index: j,
                        expected_exponent: tau,
                        observed_exponent: observed.ok().flatten().map(|v| dx.valuation().unwrap() - v),
                    });
                    self.scaling_verified = true;
                    return Ok(());
                }
                done += 1;
            }
        }
        self.scaling_verified = true;
        Ok(())
    }

    /// Incidence matrix via the ultrametric image law: on a ball with
    /// scaling exponent tau the image of the (open-exponent-e) ball is the
    /// ball of exponent tau + e around f(a_i), so
    /// a_ij = 1 iff |f(a_i) - a_j|_p < p^(tau_i + e).
    pub fn incidence_matrix(&self) -> Result<IncidenceMatrix> {
        let n = self.balls.len();
        let e = self.radius_exponent();
        let mut entries = vec![vec![false; n]; n];
        for i in 0..n {
            let fa = self.map.evaluate(&self.balls[i].center)?;
            let tau = self.scaling_exponents[i];
            for (j, bj) in self.balls.iter().enumerate() {
                entries[i][j] = fa.congruent_mod(&bj.center, 1 - (tau + e));
            }
        }
        let irreducible = irreducible(&entries);
        Ok(IncidenceMatrix {
            entries,
            irreducible,
        })
    }

    /// Record the ball index of f^t(x) for t < n_steps, or stop at the
    /// first escape from the cover.
    pub fn itinerary(&self, x: &PAdic, n_steps: usize) -> SymbolSequence {
        let mut symbols = Vec::new();
        let mut cur = x.clone();
        for step in 0..n_steps {
            match self.ball_index_of(&cur) {
                None => {
                    return SymbolSequence {
                        symbols,
                        escape_step: Some(step),
                    }
                }
                Some(i) => symbols.push(i),
            }
            if step + 1 < n_steps {
                match self.map.evaluate(&cur) {
                    Ok(next) => cur = next,
                    Err(_) => {
                        return SymbolSequence {
                            symbols,
                            escape_step: Some(step + 1),
                        }
                    }
                }
            }
        }
        SymbolSequence {
            symbols,
            escape_step: None,
        }
    }

    fn check_admissible(&self, s: &SymbolSequence, incidence: &IncidenceMatrix) -> Result<()> {
        let n = self.balls.len();
        if s.symbols.iter().any(|&i| i >= n) {
            return Err(Error::BadParameter("symbol out of range".into()));
        }
        for w in s.symbols.windows(2) {
            if !incidence.entries[w[0]][w[1]] {
                return Err(Error::BadParameter(format!(
                    "transition {} -> {} is not admissible",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    /// The dynamical metric on admissible sequences:
    /// d_f(x, y) = p^(-tau_{x_0} - ... - tau_{x_{n-1}} - kappa(x_n, y_n))
    /// with n the first disagreement index (just the kappa term at n = 0).
    /// Sequences that agree on their full common prefix give
    /// [`Error::IdenticalPrefix`].
    pub fn df_distance(&self, s: &SymbolSequence, t: &SymbolSequence) -> Result<Norm> {
        let incidence = self.incidence_matrix()?;
        self.check_admissible(s, &incidence)?;
        self.check_admissible(t, &incidence)?;
        let common = s.symbols.len().min(t.symbols.len());
        let n = (0..common).find(|&i| s.symbols[i] != t.symbols[i]);
        match n {
            None => Err(Error::IdenticalPrefix),
            Some(n) => {
                let tau_sum: i64 = s.symbols[..n]
                    .iter()
                    .map(|&i| self.scaling_exponents[i])
                    .sum();
                Ok(Norm::Exp(tau_sum + self.kappa[s.symbols[n]][t.symbols[n]]))
            }
        }
    }

    /// Desk-scale conjugacy witness: for m = 1..=max_m, the trace of A^m
    /// (the number of m-periodic admissible sequences) must equal the number
    /// of points in X fixed by f^m.
    pub fn verify_shift_conjugacy(&self, max_m: usize) -> Result<ConjugacyReport> {
        let incidence = self.incidence_matrix()?;
        let mut rows = Vec::new();
        for m in 1..=max_m {
            let trace = incidence.trace_of_power(m);
            let pts = self
                .map
                .points_of_period_dividing(m, &SearchWindow::Auto)?;
            let in_x = pts
                .iter()
                .filter(|x| self.ball_index_of(x).is_some())
                .count() as u64;
            rows.push(ConjugacyRow {
                period: m,
                trace,
                periodic_points_in_cover: in_x,
                matches: trace == in_x,
            });
        }
        Ok(ConjugacyReport {
            rows,
            incidence,
        })
    }
}

fn classify_taus(taus: &[i64]) -> RepellerClass {
    if taus.iter().all(|&t| t > 0) {
        RepellerClass::Repeller
    } else if taus.iter().all(|&t| t >= 0) && taus.iter().any(|&t| t > 0) {
        RepellerClass::WeakRepeller
    } else {
        RepellerClass::Neither
    }
}

fn irreducible(entries: &[Vec<bool>]) -> bool {
    let n = entries.len();
    // accumulate A + A^2 + ... + A^n as boolean reachability in >= 1 steps
    let mut acc = entries.to_vec();
    let mut power = entries.to_vec();
    for _ in 1..n {
        let mut next = vec![vec![false; n]; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).any(|l| power[i][l] && entries[l][j]);
            }
        }
        power = next;
        for i in 0..n {
            for j in 0..n {
                acc[i][j] |= power[i][j];
            }
        }
    }
    acc.iter().all(|row| row.iter().all(|&b| b))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyRow {
    pub period: usize,
    pub trace: u64,
    pub periodic_points_in_cover: u64,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyReport {
    pub rows: Vec<ConjugacyRow>,
    pub incidence: IncidenceMatrix,
}

/// Build the Ising-Potts repeller: requires p >= 3, rho in E_p,
/// kappa_p >= 2 solutions of x^k ≡ -1 mod p (excluding p - 1), and
/// |theta - 1|_p < |k|_p. Centers are x_i = -1 + (theta - 1) eta_i where
/// eta_i solves eta (xi_i - 1) + xi_i + 1 ≡ 0 mod p; the cover uses the
/// closed radius |p (theta - 1)|_p.
pub fn build_ising_repeller(
    prime: u64,
    k: usize,
    rho: &BigRational,
    coupling: i64,
    precision: usize,
) -> Result<RepellerSetup> {
    if prime < 3 {
        return Err(Error::RegimeViolation("requires p >= 3".into()));
    }
    let map = RationalMap::ising_potts(prime, k, rho, coupling, precision)?;
    let rho_p = PAdic::from_rational(rho, prime, precision)?;
    if !rho_p.in_ep() {
        return Err(Error::RegimeViolation(format!(
            "rho = {rho} is not in E_{prime}"
        )));
    }
    let residue = kth_roots_of_minus_one_mod_p(prime, k as u64)?;
    if residue.kappa_p < 2 {
        return Err(Error::RegimeViolation(format!(
            "kappa_p = {} < 2: no multi-ball repeller",
            residue.kappa_p
        )));
    }
    let theta = map.theta();
    let v_theta_minus_1 = rational_valuation(&(&theta - rat_int(1)), prime)
        .ok_or_else(|| Error::RegimeViolation("theta = 1 is degenerate".into()))?;
    let v_k = rational_valuation(&rat_int(k as i64), prime).unwrap();
    if v_theta_minus_1 <= v_k {
        return Err(Error::RegimeViolation(format!(
            "|theta - 1|_p = p^-{v_theta_minus_1} is not below |k|_p = p^-{v_k}"
        )));
    }
    // eta_i from the linear congruence eta (xi - 1) + xi + 1 ≡ 0 (mod p)
    let mut balls = Vec::new();
    for &xi in &residue.sol_set {
        let eta = (0..prime)
            .find(|&eta| (eta * (xi + prime - 1) + xi + 1).is_multiple_of(prime))
            .ok_or_else(|| {
                Error::RegimeViolation(format!("no eta for xi = {xi} (xi ≡ 1 mod p)"))
            })?;
        let center_rat = rat_int(-1) + (&theta - rat_int(1)) * rat_int(eta as i64);
        let center = PAdic::from_rational(&center_rat, prime, precision)?;
        // closed ball |x - c| <= |p (theta-1)| as an open ball one step up
        balls.push(PAdicBall::new(center, -v_theta_minus_1));
    }
    RepellerSetup::new(map, balls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::MapKind;
    use crate::poly::{rat, QpPoly};

    const PREC: usize = 48;

    fn the_repeller() -> RepellerSetup {
        build_ising_repeller(5, 2, &rat(6, 1), 1, PREC).unwrap()
    }

    #[test]
    fn build_repeller_centers_and_radius() {
        let setup = the_repeller();
        assert_eq!(setup.balls.len(), 2);
        // eta_1 = 2 for xi = 2; eta_2 = 3 for xi = 3: centers 69 and 104
        let c69 = PAdic::parse_rational(69, 1, 5, PREC).unwrap();
        let c104 = PAdic::parse_rational(104, 1, 5, PREC).unwrap();
        assert!(setup.balls[0].center.congruent_mod(&c69, 40));
        assert!(setup.balls[1].center.congruent_mod(&c104, 40));
        // r = |p(theta-1)|_5 = |175|_5 = 5^-2, realized as open exponent -1
        assert_eq!(setup.radius_exponent(), -1);
        // kappa(1,2) = 1 < -log_5 r = 2
        assert_eq!(setup.kappa[0][1], 1);
        assert!(setup.kappa[0][1] < 2);
    }

    #[test]
    fn build_repeller_regime_violations() {
        // kappa_7 = 0 for k = 2
        assert!(matches!(
            build_ising_repeller(7, 2, &rat(8, 1), 1, PREC),
            Err(Error::RegimeViolation(_))
        ));
        // rho not in E_5
        assert!(matches!(
            build_ising_repeller(5, 2, &rat(2, 1), 1, PREC),
            Err(Error::RegimeViolation(_))
        ));
    }

    #[test]
    fn scaling_exponents_verified() {
        let mut setup = the_repeller();
        assert_eq!(setup.scaling_exponents, vec![1, 1]);
        assert_eq!(setup.repeller_class, RepellerClass::Repeller);
        setup.verify_scaling(DEFAULT_SCALING_SAMPLES, 7).unwrap();
        assert!(setup.scaling_verified);
        assert_eq!(setup.repeller_class, RepellerClass::Repeller);
        assert!(setup.scaling_witness.is_none());
    }

    #[test]
    fn identity_map_is_not_a_repeller() {
        let id = RationalMap {
            numerator: QpPoly::x(),
            denominator: QpPoly::new(vec![rat(1, 1)]),
            outer_power: 1,
            prime: 5,
            precision: PREC,
            kind: MapKind::Generic,
            warnings: vec![],
        };
        let ball = PAdicBall::new(PAdic::one(5, PREC), 0);
        let mut setup = RepellerSetup::new(id, vec![ball]).unwrap();
        assert_eq!(setup.scaling_exponents, vec![0]);
        assert_eq!(setup.repeller_class, RepellerClass::Neither);
        setup.verify_scaling(16, 1).unwrap();
        assert_eq!(setup.repeller_class, RepellerClass::Neither);
    }

    #[test]
    fn affine_expansion_tau_one() {
        // x -> x/5 scales distances by 5: tau = 1
        let m = RationalMap {
            numerator: QpPoly::new(vec![rat(0, 1), rat(1, 5)]),
            denominator: QpPoly::new(vec![rat(1, 1)]),
            outer_power: 1,
            prime: 5,
            precision: PREC,
            kind: MapKind::Generic,
            warnings: vec![],
        };
        let ball = PAdicBall::new(PAdic::zero(5, PREC), 0);
        let mut setup = RepellerSetup::new(m, vec![ball]).unwrap();
        assert_eq!(setup.scaling_exponents, vec![1]);
        assert_eq!(setup.repeller_class, RepellerClass::Repeller);
        setup.verify_scaling(32, 3).unwrap();
        assert_eq!(setup.repeller_class, RepellerClass::Repeller);
    }

    #[test]
    fn incidence_full_shift() {
        let setup = the_repeller();
        let inc = setup.incidence_matrix().unwrap();
        assert_eq!(inc.entries, vec![vec![true, true], vec![true, true]]);
        assert!(inc.irreducible);
    }

    #[test]
    fn incidence_reducible_example() {
        // the identity on two balls: each ball covers only itself, so the
        // first row is (1,0) and ball 1 is unreachable from ball 0
        let m = RationalMap {
            numerator: QpPoly::x(),
            denominator: QpPoly::new(vec![rat(1, 1)]),
            outer_power: 1,
            prime: 5,
            precision: PREC,
            kind: MapKind::Generic,
            warnings: vec![],
        };
        let b0 = PAdicBall::new(PAdic::zero(5, PREC), 0);
        let b1 = PAdicBall::new(PAdic::one(5, PREC), 0);
        let setup = RepellerSetup::new(m, vec![b0, b1]).unwrap();
        let inc = setup.incidence_matrix().unwrap();
        assert_eq!(inc.entries[0], vec![true, false]);
        assert_eq!(inc.entries[1], vec![false, true]);
        assert!(!inc.irreducible);
    }

    #[test]
    fn single_invariant_ball_trivially_irreducible() {
        let m = RationalMap {
            numerator: QpPoly::new(vec![rat(0, 1), rat(1, 5)]),
            denominator: QpPoly::new(vec![rat(1, 1)]),
            outer_power: 1,
            prime: 5,
            precision: PREC,
            kind: MapKind::Generic,
            warnings: vec![],
        };
        let ball = PAdicBall::new(PAdic::zero(5, PREC), 1);
        let setup = RepellerSetup::new(m, vec![ball]).unwrap();
        let inc = setup.incidence_matrix().unwrap();
        assert_eq!(inc.entries, vec![vec![true]]);
        assert!(inc.irreducible);
    }

    #[test]
    fn itinerary_paths() {
        let setup = the_repeller();
        // a fixed point in X stays in its ball forever
        let fixed = setup
            .map
            .fixed_points(&SearchWindow::Auto)
            .unwrap()
            .reports
            .into_iter()
            .find(|r| setup.ball_index_of(&r.point).is_some())
            .unwrap()
            .point;
        let it = setup.itinerary(&fixed, 6);
        assert_eq!(it.escape_step, None);
        assert_eq!(it.symbols.len(), 6);
        assert!(it.symbols.windows(2).all(|w| w[0] == w[1]));
        // a point outside the cover escapes immediately
        let out = PAdic::one(5, PREC);
        let esc = setup.itinerary(&out, 4);
        assert_eq!(esc.escape_step, Some(0));
        assert!(esc.symbols.is_empty());
        // a period-2 point alternates symbols
        let cycles = setup.map.periodic_points(2, &SearchWindow::Auto).unwrap();
        let two_cycle = &cycles[0];
        let it2 = setup.itinerary(&two_cycle[0], 6);
        assert_eq!(it2.escape_step, None);
        assert_eq!(it2.symbols[0], it2.symbols[2]);
        assert_eq!(it2.symbols[1], it2.symbols[3]);
        assert_ne!(it2.symbols[0], it2.symbols[1]);
    }

    #[test]
    fn df_distance_formula() {
        let setup = the_repeller();
        // first disagreement at position 0: just the kappa term
        let s = SymbolSequence::new(vec![0, 1, 0]);
        let t = SymbolSequence::new(vec![1, 1, 0]);
        let d = setup.df_distance(&s, &t).unwrap();
        assert_eq!(d, Norm::Exp(1)); // kappa(0,1) = 1 -> p^-1
        // disagreement at position 2: tau_0 + tau_1 + kappa
        let s2 = SymbolSequence::new(vec![0, 1, 0]);
        let t2 = SymbolSequence::new(vec![0, 1, 1]);
        let d2 = setup.df_distance(&s2, &t2).unwrap();
        assert_eq!(d2, Norm::Exp(1 + 1 + 1));
        // identical prefixes are an explicit error
        let u = SymbolSequence::new(vec![0, 1]);
        let v = SymbolSequence::new(vec![0, 1, 0]);
        assert_eq!(setup.df_distance(&u, &v).unwrap_err(), Error::IdenticalPrefix);
    }

    #[test]
    fn df_distance_is_ultrametric_on_samples() {
        let setup = the_repeller();
        // all sequences over {0,1} of length 4 (full shift: all admissible)
        let seqs: Vec<SymbolSequence> = (0..16u32)
            .map(|m| SymbolSequence::new((0..4).map(|i| (m >> i & 1) as usize).collect()))
            .collect();
        for a in &seqs {
            for b in &seqs {
                for c in &seqs {
                    let dab = setup.df_distance(a, b);
                    let dbc = setup.df_distance(b, c);
                    let dac = setup.df_distance(a, c);
                    if let (Ok(x), Ok(y), Ok(z)) = (dab, dbc, dac) {
                        assert!(z <= x.max(y), "ultrametric violated");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugacy_counts_match_traces() {
        let setup = the_repeller();
        let report = setup.verify_shift_conjugacy(3).unwrap();
        let expected = [2u64, 4, 8];
        for (row, &want) in report.rows.iter().zip(expected.iter()) {
            assert_eq!(row.trace, want, "trace at m={}", row.period);
            assert_eq!(row.periodic_points_in_cover, want);
            assert!(row.matches);
        }
    }

    #[test]
    fn toy_reducible_trace() {
        let inc = IncidenceMatrix {
            entries: vec![vec![true, false], vec![false, false]],
            irreducible: false,
        };
        assert_eq!(inc.trace_of_power(1), 1);
        assert_eq!(inc.trace_of_power(2), 1);
    }
}
