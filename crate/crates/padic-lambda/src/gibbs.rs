//! The lambda-model on the Cayley tree: Hamiltonians, exact finite-volume
//! generalized p-adic quasi Gibbs measures, the compatibility recurrence,
//! translation-invariant and level-periodic measure construction,
//! boundedness classification, and phase-transition verdicts.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dynamics::{MapKind, RationalMap, SearchWindow, StabilityClass};
use crate::error::{Error, Result};
use crate::padic::{is_prime, rational_valuation, sum_padics, PAdic, SumOutcome};
use crate::poly::rat_pow;
use crate::residue::kth_roots_of_minus_one_mod_p;
use crate::tree;

/// Brute-force enumeration refuses volumes with more than this many spins.
pub const MAX_ENUM_SPINS: u32 = 20;

/// Depth of the valuation profile used for boundedness evidence.
pub const PROFILE_DEPTH: u32 = 8;

/// Pair interaction lambda: {-1,+1}^2 -> Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InteractionSpec {
    /// [l(1,1), l(1,-1), l(-1,1), l(-1,-1)]
    pub table: [i64; 4],
}

impl InteractionSpec {
    pub fn new(table: [i64; 4]) -> InteractionSpec {
        InteractionSpec { table }
    }

    /// The Ising shortcut lambda(u, v) = N u v.
    pub fn ising(n_coupling: i64) -> InteractionSpec {
        InteractionSpec {
            table: [n_coupling, -n_coupling, -n_coupling, n_coupling],
        }
    }

    pub fn lambda(&self, s: i8, t: i8) -> i64 {
        match (s, t) {
            (1, 1) => self.table[0],
            (1, -1) => self.table[1],
            (-1, 1) => self.table[2],
            (-1, -1) => self.table[3],
            _ => panic!("spins must be +1 or -1"),
        }
    }

    /// `Some(N)` when the table has the Ising form lambda(u,v) = N u v.
    pub fn ising_coupling(&self) -> Option<i64> {
        let [a, b, c, d] = self.table;
        if a == d && b == c && b == -a {
            Some(a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelParams {
    pub prime: u64,
    pub tree_order: u8,
    #[serde(skip)]
    pub rho: BigRational,
    pub interaction: InteractionSpec,
    pub precision: usize,
}

impl ModelParams {
    pub fn new(
        prime: u64,
        tree_order: u8,
        rho: BigRational,
        interaction: InteractionSpec,
        precision: usize,
    ) -> Result<ModelParams> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if tree_order < 1 {
            return Err(Error::BadParameter("tree order k must be >= 1".into()));
        }
        if rho.is_zero() || rho == BigRational::one() || rho == -BigRational::one() {
            return Err(Error::BadParameter("rho must avoid {-1, 0, 1}".into()));
        }
        for e in interaction.table {
            if e.abs() > crate::dynamics::MAX_INTERACTION_EXPONENT {
                return Err(Error::BadParameter(format!(
                    "interaction exponent {e} exceeds the bound"
                )));
            }
        }
        Ok(ModelParams {
            prime,
            tree_order,
            rho,
            interaction,
            precision,
        })
    }

    pub fn ising(
        prime: u64,
        tree_order: u8,
        rho: BigRational,
        n_coupling: i64,
        precision: usize,
    ) -> Result<ModelParams> {
        ModelParams::new(
            prime,
            tree_order,
            rho,
            InteractionSpec::ising(n_coupling),
            precision,
        )
    }

    pub fn rho_padic(&self) -> PAdic {
        PAdic::from_rational(&self.rho, self.prime, self.precision).expect("validated")
    }

    /// The translation-invariant recurrence map F for this interaction.
    pub fn ti_map(&self) -> RationalMap {
        if let Some(n) = self.interaction.ising_coupling() {
            RationalMap::ising_potts(
                self.prime,
                self.tree_order as usize,
                &self.rho,
                n,
                self.precision,
            )
            .expect("validated")
        } else {
            RationalMap::lambda_ti(
                self.prime,
                self.tree_order as usize,
                &self.rho,
                self.interaction.table,
                self.precision,
            )
            .expect("validated")
        }
    }
}

/// Boundary field normalized as h_x = (h_{-1,x}, h_{1,x}) = (1, h) at every
/// vertex; either one h for all levels or an m-periodic cycle over levels.
#[derive(Debug, Clone, Serialize)]
pub enum BoundaryField {
    TranslationInvariant { h: PAdic },
    /// `cycle[l % m]` is the field value at tree level l.
    LevelPeriodic { cycle: Vec<PAdic> },
}

impl BoundaryField {
    pub fn ti(h: PAdic) -> BoundaryField {
        BoundaryField::TranslationInvariant { h }
    }

    /// Field value h at a given tree level.
    pub fn at_level(&self, level: u32) -> &PAdic {
        match self {
            BoundaryField::TranslationInvariant { h } => h,
            BoundaryField::LevelPeriodic { cycle } => &cycle[level as usize % cycle.len()],
        }
    }
}

/// BFS indexing of V_n: vertex 0 is the root, each vertex stores its parent.
struct TreeIndex {
    parent: Vec<usize>,
    total: usize,
    /// index of the first level-n vertex
    boundary_start: usize,
}

impl TreeIndex {
    fn build(k: u8, n: u32) -> Result<TreeIndex> {
        let total = tree::ball_size(k, n);
        if total > MAX_ENUM_SPINS as u128 {
            return Err(Error::EnumerationGuard(format!(
                "|V_{n}| = {total} exceeds the {MAX_ENUM_SPINS}-spin brute-force guard"
            )));
        }
        let total = total as usize;
        let mut parent = vec![usize::MAX; total];
        let mut next = 1usize;
        let mut frontier = vec![0usize];
        for _ in 1..=n {
            let mut new_frontier = Vec::new();
            for &v in &frontier {
                for _ in 0..k {
                    parent[next] = v;
                    new_frontier.push(next);
                    next += 1;
                }
            }
            frontier = new_frontier;
        }
        let boundary_start = total - frontier.len();
        Ok(TreeIndex {
            parent,
            total,
            boundary_start,
        })
    }

    fn spin(mask: u32, i: usize) -> i8 {
        if mask >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    fn hamiltonian(&self, mask: u32, spec: &InteractionSpec) -> i64 {
        let mut h = 0i64;
        for i in 1..self.total {
            h += spec.lambda(Self::spin(mask, self.parent[i]), Self::spin(mask, i));
        }
        h
    }

    fn boundary_plus_count(&self, mask: u32) -> u32 {
        let mut c = 0;
        for i in self.boundary_start..self.total {
            if mask >> i & 1 == 1 {
                c += 1;
            }
        }
        c
    }
}

/// A spin configuration on V_n in BFS vertex order (root first).
pub type SpinConfig = Vec<i8>;

fn config_to_mask(config: &[i8]) -> Result<u32> {
    if config.len() > MAX_ENUM_SPINS as usize {
        return Err(Error::EnumerationGuard("configuration too large".into()));
    }
    let mut mask = 0u32;
    for (i, &s) in config.iter().enumerate() {
        match s {
            1 => mask |= 1 << i,
            -1 => {}
            _ => return Err(Error::BadParameter("spins must be +1 or -1".into())),
        }
    }
    Ok(mask)
}

/// All spin configurations on V_n in mask order (deterministic).
pub fn enumerate_configs(k: u8, n: u32) -> Result<Vec<SpinConfig>> {
    let idx = TreeIndex::build(k, n)?;
    let mut out = Vec::with_capacity(1 << idx.total);
    for mask in 0u32..1 << idx.total {
        out.push((0..idx.total).map(|i| TreeIndex::spin(mask, i)).collect());
    }
    Ok(out)
}

/// H_n(sigma) = sum of lambda over the edges of V_n.
pub fn hamiltonian(k: u8, n: u32, config: &[i8], spec: &InteractionSpec) -> Result<i64> {
    let idx = TreeIndex::build(k, n)?;
    if config.len() != idx.total {
        return Err(Error::BadParameter(format!(
            "configuration must cover all {} vertices of V_{n}",
            idx.total
        )));
    }
    Ok(idx.hamiltonian(config_to_mask(config)?, spec))
}

/// Cached powers for the weight computation at one volume.
struct WeightTable {
    rho: PAdic,
    h_boundary: PAdic,
}

impl WeightTable {
    fn new(params: &ModelParams, field: &BoundaryField, n: u32) -> WeightTable {
        WeightTable {
            rho: params.rho_padic(),
            h_boundary: field.at_level(n).clone(),
        }
    }

    /// rho^H * h^(number of +1 spins on W_n); exact zero when h is zero.
    fn weight(&self, h_exp: i64, plus_count: u32) -> Result<PAdic> {
        let base = self.rho.pow_int(h_exp)?;
        if self.h_boundary.is_zero() {
            if plus_count > 0 {
                return Ok(PAdic::zero(base.prime(), base.precision()));
            }
            return Ok(base);
        }
        Ok(base.mul(&self.h_boundary.pow_int(plus_count as i64)?))
    }
}

/// The partition function Z_n by full enumeration of spin configurations.
///
/// An exactly vanishing sum is a [`Error::ZeroPartition`] (no measure exists
/// for the field); a sum that cancels below the working precision is
/// reported as [`Error::PrecisionExhausted`].
pub fn partition_function(params: &ModelParams, n: u32, field: &BoundaryField) -> Result<PAdic> {
    let idx = TreeIndex::build(params.tree_order, n)?;
    let table = WeightTable::new(params, field, n);
    let mut terms = Vec::with_capacity(1 << idx.total);
    for mask in 0u32..1 << idx.total {
        let h = idx.hamiltonian(mask, &params.interaction);
        terms.push(table.weight(h, idx.boundary_plus_count(mask))?);
    }
    match sum_padics(terms.iter(), params.prime) {
        SumOutcome::ExactZero => Err(Error::ZeroPartition),
        SumOutcome::ApproxZero { abs } => Err(Error::PrecisionExhausted(format!(
            "partition function cancels below p^-({abs})"
        ))),
        SumOutcome::Value(z) => Ok(z),
    }
}

/// mu^(n)(sigma) = rho^(H_n(sigma)) * prod_{x in W_n} h_{x,sigma(x)} / Z_n.
pub fn cylinder_measure(
    params: &ModelParams,
    n: u32,
    field: &BoundaryField,
    config: &[i8],
) -> Result<PAdic> {
    let idx = TreeIndex::build(params.tree_order, n)?;
    if config.len() != idx.total {
        return Err(Error::BadParameter(format!(
            "configuration must cover all {} vertices of V_{n}",
            idx.total
        )));
    }
    let z = partition_function(params, n, field)?;
    let mask = config_to_mask(config)?;
    let table = WeightTable::new(params, field, n);
    let num = table.weight(
        idx.hamiltonian(mask, &params.interaction),
        idx.boundary_plus_count(mask),
    )?;
    num.div(&z)
}

/// A compatibility violation witness.
#[derive(Debug, Clone, Serialize)]
pub struct CompatWitness {
    pub config: SpinConfig,
    pub discrepancy_norm_exponent: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatReport {
    pub level: u32,
    pub holds: bool,
    pub checked_configs: usize,
    pub worst: Option<CompatWitness>,
}

/// Brute-force check of the Kolmogorov compatibility condition between
/// levels n and n-1: for every sigma on V_(n-1), the sum of mu^(n) over all
/// boundary extensions must equal mu^(n-1)(sigma) at working precision.
pub fn check_compatibility(params: &ModelParams, n: u32, field: &BoundaryField) -> Result<CompatReport> {
    if n < 1 {
        return Err(Error::BadParameter("compatibility needs n >= 1".into()));
    }
    let idx_lo = TreeIndex::build(params.tree_order, n - 1)?;
    let idx_hi = TreeIndex::build(params.tree_order, n)?;
    let z_lo = partition_function(params, n - 1, field)?;
    let z_hi = partition_function(params, n, field)?;
    let t_lo = WeightTable::new(params, field, n - 1);
    let t_hi = WeightTable::new(params, field, n);
    let w_bits = idx_hi.total - idx_lo.total;
    let mut worst: Option<CompatWitness> = None;
    for lo_mask in 0u32..1 << idx_lo.total {
        let mut terms = Vec::with_capacity(1 << w_bits);
        for omega in 0u32..1 << w_bits {
            let mask = lo_mask | omega << idx_lo.total;
            let w = t_hi.weight(
                idx_hi.hamiltonian(mask, &params.interaction),
                idx_hi.boundary_plus_count(mask),
            )?;
            terms.push(w.div(&z_hi)?);
        }
        let lhs = sum_padics(terms.iter(), params.prime);
        let rhs = t_lo
            .weight(
                idx_lo.hamiltonian(lo_mask, &params.interaction),
                idx_lo.boundary_plus_count(lo_mask),
            )?
            .div(&z_lo)?;
        let discrepancy = match lhs {
            SumOutcome::ExactZero | SumOutcome::ApproxZero { .. } => {
                // lhs is zero at precision: discrepancy is |rhs|
                if rhs.is_zero() {
                    None
                } else {
                    Some(-rhs.valuation().unwrap())
                }
            }
            SumOutcome::Value(l) => match l.sub(&rhs) {
                Err(_) => None, // equal at working precision
                Ok(d) => Some(-d.valuation().unwrap()),
            },
        };
        if let Some(exp) = discrepancy {
            let is_worse = worst
                .as_ref()
                .map(|w| exp > w.discrepancy_norm_exponent)
                .unwrap_or(true);
            if is_worse {
                worst = Some(CompatWitness {
                    config: (0..idx_lo.total)
                        .map(|i| TreeIndex::spin(lo_mask, i))
                        .collect(),
                    discrepancy_norm_exponent: exp,
                });
            }
        }
    }
    Ok(CompatReport {
        level: n,
        holds: worst.is_none(),
        checked_configs: 1 << idx_lo.total,
        worst,
    })
}

/// One step of the boundary-field recurrence: the product over the k
/// children of the Moebius factor
/// (rho^l(1,1) h_y + rho^l(1,-1)) / (rho^l(-1,1) h_y + rho^l(-1,-1)).
pub fn recurrence_rhs(
    spec: &InteractionSpec,
    rho: &BigRational,
    prime: u64,
    precision: usize,
    children: &[PAdic],
) -> Result<PAdic> {
    let [l11, l1m, lm1, lmm] = spec.table;
    let coef = |e: i64| PAdic::from_rational(&rat_pow(rho, e), prime, precision);
    let (a, b, c, d) = (coef(l11)?, coef(l1m)?, coef(lm1)?, coef(lmm)?);
    let mut acc = PAdic::one(prime, precision);
    for h in children {
        let num = match a.mul(h).add(&b) {
            Ok(v) => v,
            Err(Error::PrecisionExhausted(_)) => PAdic::zero(prime, precision),
            Err(e) => return Err(e),
        };
        let den = match c.mul(h).add(&d) {
            Ok(v) => v,
            Err(Error::PrecisionExhausted(_)) => return Err(Error::PoleHit),
            Err(e) => return Err(e),
        };
        if den.is_zero() {
            return Err(Error::PoleHit);
        }
        acc = acc.mul(&num.div(&den)?);
    }
    Ok(acc)
}

/// Closed form for the Ising cylinder measure at a translation-invariant
/// fixed-point field h != -1:
/// rho^(H_n) h^(#plus on W_n) / ((rho^-N h + rho^N)^|L_n| (h + 1)).
pub fn ti_closed_form(
    params: &ModelParams,
    n: u32,
    h: &PAdic,
    config: &[i8],
) -> Result<PAdic> {
    let coupling = params
        .interaction
        .ising_coupling()
        .ok_or_else(|| Error::BadParameter("closed form requires the Ising interaction".into()))?;
    let one = PAdic::one(params.prime, params.precision);
    let h_plus_one = match h.add(&one) {
        Ok(v) if !v.is_zero() => v,
        _ => return Err(Error::BadField("h = -1 admits no measure".into())),
    };
    let idx = TreeIndex::build(params.tree_order, n)?;
    let mask = config_to_mask(config)?;
    if config.len() != idx.total {
        return Err(Error::BadParameter("configuration size mismatch".into()));
    }
    let rho = params.rho_padic();
    let numerator = rho
        .pow_int(idx.hamiltonian(mask, &params.interaction))?
        .mul(&h.pow_int(idx.boundary_plus_count(mask) as i64)?);
    let edge_count = tree::edge_count(params.tree_order, n) as i64;
    let base = match rho.pow_int(-coupling)?.mul(h).add(&rho.pow_int(coupling)?) {
        Ok(v) if !v.is_zero() => v,
        _ => return Err(Error::ZeroPartition),
    };
    numerator.div(&base.pow_int(edge_count)?)?.div(&h_plus_one)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
}

/// Valuation profile of the cylinder-measure norms: `exponents[j]` is the
/// exponent e(n) with max_sigma |mu(sigma_n)|_p = p^(e(n)) for n = j+1.
#[derive(Debug, Clone, Serialize)]
pub struct NormProfile {
    pub exponents: Vec<i64>,
}

impl NormProfile {
    /// The empirical divergence test at desk scale: the norm exceeds p^8 by
    /// depth 8.
    pub fn diverges(&self) -> bool {
        self.exponents
            .last()
            .map(|&e| e > PROFILE_DEPTH as i64)
            .unwrap_or(false)
    }
}

/// Minimum over configurations of the numerator valuation
/// H_n(sigma) v(rho) + (#plus on W_n) v(h), by dynamic programming over the
/// tree (no enumeration).
fn min_numerator_valuation(
    spec: &InteractionSpec,
    k: u8,
    v_rho: i64,
    v_h: i64,
    n: u32,
) -> i64 {
    // g_j(s): minimal subtree valuation below a vertex of spin s, j levels
    let mut g = [v_h, 0i64]; // index 0: spin +1, index 1: spin -1
    for _ in 0..n {
        let next = |s: i8| -> i64 {
            let plus = spec.lambda(s, 1) * v_rho + g[0];
            let minus = spec.lambda(s, -1) * v_rho + g[1];
            (k as i64) * plus.min(minus)
        };
        g = [next(1), next(-1)];
    }
    g[0].min(g[1])
}

/// v(Z_n) computed by the exact subtree recursion
/// w_0(s) = h_s, w_(j+1)(s) = (sum_t rho^lambda(s,t) w_j(t))^k,
/// Z_n = w_n(+1) + w_n(-1). No configuration enumeration.
fn partition_valuation_recursive(
    params: &ModelParams,
    h: &PAdic,
    n: u32,
) -> Result<i64> {
    let p = params.prime;
    let prec = params.precision;
    let rho = params.rho_padic();
    let lam = |s: i8, t: i8| params.interaction.lambda(s, t);
    let mut w_plus = h.clone();
    let mut w_minus = PAdic::one(p, prec);
    for _ in 0..n {
        let step = |s: i8, wp: &PAdic, wm: &PAdic| -> Result<PAdic> {
            let a = rho.pow_int(lam(s, 1))?.mul(wp);
            let b = rho.pow_int(lam(s, -1))?.mul(wm);
            let tot = a.add(&b)?;
            tot.pow_int(params.tree_order as i64)
        };
        let np = step(1, &w_plus, &w_minus)?;
        let nm = step(-1, &w_plus, &w_minus)?;
        w_plus = np;
        w_minus = nm;
    }
    match w_plus.add(&w_minus) {
        Ok(z) => Ok(z.valuation().expect("nonzero")),
        Err(e) => Err(e),
    }
}

/// Norm profile for a translation-invariant field of a general lambda-model,
/// by pure valuation arithmetic (partition recursion + numerator DP).
pub fn norm_profile(params: &ModelParams, h: &PAdic) -> Result<NormProfile> {
    let v_rho = rational_valuation(&params.rho, params.prime).unwrap();
    let v_h = h
        .valuation()
        .ok_or_else(|| Error::BadField("field value must be nonzero".into()))?;
    let mut exponents = Vec::new();
    for n in 1..=PROFILE_DEPTH {
        let vz = partition_valuation_recursive(params, h, n)?;
        let vmin = min_numerator_valuation(&params.interaction, params.tree_order, v_rho, v_h, n);
        exponents.push(vz - vmin);
    }
    Ok(NormProfile { exponents })
}

/// Norm profile for an Ising fixed-point field via the closed-form
/// denominator valuations (no recursion, no enumeration).
pub fn norm_profile_ising_closed_form(
    params: &ModelParams,
    coupling: i64,
    h: &PAdic,
) -> Result<NormProfile> {
    let p = params.prime;
    let prec = params.precision;
    let one = PAdic::one(p, prec);
    let rho = params.rho_padic();
    let v_h1 = match h.add(&one) {
        Ok(v) if !v.is_zero() => v.valuation().unwrap(),
        _ => return Err(Error::BadField("h = -1 admits no measure".into())),
    };
    let v_base = match rho.pow_int(-coupling)?.mul(h).add(&rho.pow_int(coupling)?) {
        Ok(v) if !v.is_zero() => v.valuation().unwrap(),
        _ => return Err(Error::ZeroPartition),
    };
    let v_rho = rational_valuation(&params.rho, p).unwrap();
    let v_h = h.valuation().unwrap();
    let mut exponents = Vec::new();
    for n in 1..=PROFILE_DEPTH {
        let edges = tree::edge_count(params.tree_order, n) as i64;
        let vz = edges * v_base + v_h1;
        let vmin = min_numerator_valuation(&params.interaction, params.tree_order, v_rho, v_h, n);
        exponents.push(vz - vmin);
    }
    Ok(NormProfile { exponents })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundednessReport {
    pub verdict: Boundedness,
    /// Which statement decided the verdict.
    pub criterion_path: String,
    pub profile: NormProfile,
}

/// Boundedness of the Ising TI measure mu_h:
/// |rho|_p != 1 implies bounded; |rho|_p = 1 implies unbounded exactly when
/// 0 < |h + rho^(2N)|_p < 1. The valuation profile is attached as an
/// empirical cross-check.
pub fn boundedness_classify(params: &ModelParams, h: &PAdic) -> Result<BoundednessReport> {
    let coupling = params.interaction.ising_coupling().ok_or_else(|| {
        Error::BadParameter("boundedness theorem applies to the Ising interaction".into())
    })?;
    let one = PAdic::one(params.prime, params.precision);
    if h.congruent_mod(&one.neg(), params.precision as i64) {
        return Err(Error::BadField("h = -1 admits no measure".into()));
    }
    let profile = norm_profile_ising_closed_form(params, coupling, h)?;
    let v_rho = rational_valuation(&params.rho, params.prime).unwrap();
    if v_rho != 0 {
        return Ok(BoundednessReport {
            verdict: Boundedness::Bounded,
            criterion_path: "|rho|_p != 1: bounded".into(),
            profile,
        });
    }
    let theta = rat_pow(&params.rho, 2 * coupling);
    let theta_p = PAdic::from_rational(&theta, params.prime, params.precision)?;
    let shifted = h.add(&theta_p)?;
    if shifted.is_zero() {
        return Err(Error::ZeroPartition);
    }
    let v = shifted.valuation().unwrap();
    if v > 0 {
        Ok(BoundednessReport {
            verdict: Boundedness::Unbounded,
            criterion_path: format!("|rho|_p = 1 and 0 < |h + rho^2N|_p = p^-{v} < 1: unbounded"),
            profile,
        })
    } else {
        Ok(BoundednessReport {
            verdict: Boundedness::Bounded,
            criterion_path: "|rho|_p = 1 and |h + rho^2N|_p = 1: bounded".into(),
            profile,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseVerdict {
    PhaseTransition,
    QuasiPhaseTransition,
    NoTransition,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    /// The boundary-field value h defining the measure.
    pub field: PAdic,
    pub field_literal: String,
    /// The fixed point of the regime map that generated the field (equals
    /// `field` for the Ising census).
    pub regime_point: PAdic,
    pub class: StabilityClass,
    pub bounded: Boundedness,
    pub criterion_path: String,
    pub profile: NormProfile,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremComparison {
    pub applicable: bool,
    pub description: String,
    pub expected_count: Option<usize>,
    pub found_count: usize,
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureCensus {
    pub prime: u64,
    pub tree_order: u8,
    pub rho: String,
    pub lambda_table: [i64; 4],
    pub entries: Vec<CensusEntry>,
    /// Fields found by the fixed-point search but excluded from the census
    /// (h = -1, vanishing partition function), with reasons.
    pub excluded: Vec<String>,
    pub bounded_count: usize,
    pub unbounded_count: usize,
    pub theorem: TheoremComparison,
    pub verdict: PhaseVerdict,
    /// Pairs of entries whose measures agree on every depth-1 cylinder.
    pub measure_equal_pairs: Vec<(usize, usize)>,
}

fn phase_verdict(entries: &[CensusEntry]) -> PhaseVerdict {
    let bounded = entries
        .iter()
        .filter(|e| e.bounded == Boundedness::Bounded)
        .count();
    let unbounded = entries.len() - bounded;
    if bounded >= 1 && unbounded >= 1 {
        PhaseVerdict::PhaseTransition
    } else if bounded >= 2 {
        PhaseVerdict::QuasiPhaseTransition
    } else {
        PhaseVerdict::NoTransition
    }
}

/// Detect pairs of census fields that induce the same measure on every
/// depth-1 cylinder (field-level distinctness does not by itself guarantee
/// measure-level distinctness).
fn measure_equal_pairs(params: &ModelParams, entries: &[CensusEntry]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let configs = match enumerate_configs(params.tree_order, 1) {
        Ok(c) => c,
        Err(_) => return pairs,
    };
    let measures: Vec<Option<Vec<PAdic>>> = entries
        .iter()
        .map(|e| {
            let field = BoundaryField::ti(e.field.clone());
            configs
                .iter()
                .map(|c| cylinder_measure(params, 1, &field, c))
                .collect::<Result<Vec<_>>>()
                .ok()
        })
        .collect();
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            if let (Some(mi), Some(mj)) = (&measures[i], &measures[j]) {
                let tol = (params.precision / 2) as i64;
                if mi
                    .iter()
                    .zip(mj.iter())
                    .all(|(a, b)| a.congruent_mod(b, tol))
                {
                    pairs.push((i, j));
                }
            }
        }
    }
    pairs
}

/// The census of translation-invariant generalized p-adic Gibbs measures
/// for the Ising model: fixed points of the Ising-Potts map inside the
/// regime window, h = -1 dropped, each classified by the boundedness
/// theorem, with the count compared against the published formula whenever
/// its hypotheses hold.
pub fn ti_census_ising(params: &ModelParams) -> Result<MeasureCensus> {
    let coupling = params
        .interaction
        .ising_coupling()
        .ok_or_else(|| Error::BadParameter("census requires the Ising interaction".into()))?;
    let map = params.ti_map();
    let found = map.fixed_points(&SearchWindow::Auto)?;
    let minus_one = PAdic::from_integer(-1, params.prime, params.precision)?;
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for report in found.reports {
        if report
            .point
            .congruent_mod(&minus_one, params.precision as i64)
        {
            excluded.push("fixed point h = -1: no measure".to_string());
            continue;
        }
        match boundedness_classify(params, &report.point) {
            Ok(b) => entries.push(CensusEntry {
                field_literal: report.point.literal(),
                field: report.point.clone(),
                regime_point: report.point,
                class: report.class,
                bounded: b.verdict,
                criterion_path: b.criterion_path,
                profile: b.profile,
            }),
            Err(Error::ZeroPartition) => {
                excluded.push(format!(
                    "fixed point {} has vanishing partition function",
                    report.point
                ));
            }
            Err(e) => return Err(e),
        }
    }
    for inc in &found.inconclusive {
        excluded.push(format!(
            "inconclusive residue cluster at valuation {}",
            inc.valuation
        ));
    }

    // Theorem comparison: card = N_{p,k} + 2 (k even) / + 1 (k odd) when
    // |rho^N| > 1 and |rho^-N| < |k-1|; card = N + 1 / N when |rho^N| < 1
    // and |rho^N| < |k+1|.
    let k = params.tree_order as u64;
    let e = coupling * rational_valuation(&params.rho, params.prime).unwrap();
    let residue = kth_roots_of_minus_one_mod_p(params.prime, k)?;
    let n_pk = residue.n_kp.unwrap_or(0) as usize;
    let v_km1 = rational_valuation(
        &BigRational::from_integer((k as i64 - 1).into()),
        params.prime,
    );
    let v_kp1 = rational_valuation(
        &BigRational::from_integer((k as i64 + 1).into()),
        params.prime,
    );
    let theorem = if e < 0 {
        // |rho^N|_p > 1
        let refined = match v_km1 {
            None => false, // k = 1
            Some(v) => -e > v, // |rho^-N| = p^e... |rho^-N|_p < |k-1|_p iff e < -v
        };
        let expected = if refined {
            Some(n_pk + if k.is_multiple_of(2) { 2 } else { 1 })
        } else {
            None
        };
        TheoremComparison {
            applicable: refined,
            description: if refined {
                "|rho^N|_p > 1 and |rho^-N|_p < |k-1|_p: card = N_{p,k} + 2 (k even) / + 1 (k odd)"
                    .into()
            } else {
                "|rho^N|_p > 1: card >= 3 (refined hypothesis not met)".into()
            },
            expected_count: expected,
            found_count: entries.len(),
            matches: expected.map(|c| c == entries.len()),
        }
    } else {
        let refined = match v_kp1 {
            None => false,
            Some(v) => e > v,
        };
        let expected = if refined {
            Some(n_pk + if k.is_multiple_of(2) { 1 } else { 0 })
        } else {
            None
        };
        TheoremComparison {
            applicable: refined,
            description: if refined {
                "|rho^N|_p < 1 and |rho^N|_p < |k+1|_p: card = N_{p,k} + 1 (k even) / N_{p,k} (k odd)"
                    .into()
            } else {
                "|rho^N|_p < 1: card >= 1 (refined hypothesis not met)".into()
            },
            expected_count: expected,
            found_count: entries.len(),
            matches: expected.map(|c| c == entries.len()),
        }
    };
    let verdict = phase_verdict(&entries);
    let measure_equal = measure_equal_pairs(params, &entries);
    Ok(MeasureCensus {
        prime: params.prime,
        tree_order: params.tree_order,
        rho: params.rho.to_string(),
        lambda_table: params.interaction.table,
        entries,
        excluded,
        bounded_count: 0,
        unbounded_count: 0,
        theorem,
        verdict,
        measure_equal_pairs: measure_equal,
    }
    .with_counts())
}

impl MeasureCensus {
    fn with_counts(mut self) -> MeasureCensus {
        self.bounded_count = self
            .entries
            .iter()
            .filter(|e| e.bounded == Boundedness::Bounded)
            .count();
        self.unbounded_count = self.entries.len() - self.bounded_count;
        self
    }
}

/// Level-periodic boundary fields from the m-cycles of the Ising-Potts map,
/// arranged so that the field at level l equals F(field at level l+1).
/// Each returned field is re-validated against the compatibility condition
/// at n <= 3 (k = 2) before being returned.
pub fn hm_periodic_fields(params: &ModelParams, m: usize) -> Result<Vec<BoundaryField>> {
    let map = params.ti_map();
    let minus_one = PAdic::from_integer(-1, params.prime, params.precision)?;
    let mut fields = Vec::new();
    if m == 1 {
        let found = map.fixed_points(&SearchWindow::Auto)?;
        for r in found.reports {
            if !r.point.congruent_mod(&minus_one, params.precision as i64) {
                fields.push(BoundaryField::ti(r.point));
            }
        }
    } else {
        let cycles = map.periodic_points(m, &SearchWindow::Auto)?;
        for orbit in cycles {
            if orbit
                .iter()
                .any(|x| x.congruent_mod(&minus_one, params.precision as i64))
            {
                continue;
            }
            // field(l) = orbit[(m - l) mod m] satisfies field(l) = F(field(l+1))
            let mlen = orbit.len();
            let cycle: Vec<PAdic> = (0..mlen).map(|l| orbit[(mlen - l) % mlen].clone()).collect();
            fields.push(BoundaryField::LevelPeriodic { cycle });
        }
    }
    // defining property re-checked at desk scale
    let max_n = match params.tree_order {
        2 => 3,
        3 => 2,
        _ => 1,
    };
    let mut validated = Vec::new();
    for f in fields {
        let mut ok = true;
        for n in 1..=max_n {
            match check_compatibility(params, n, &f) {
                Ok(rep) if rep.holds => {}
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            validated.push(f);
        }
    }
    Ok(validated)
}

/// Whether x has a square root in Q_p.
pub fn sqrt_exists_in_qp(x: &BigRational, p: u64) -> bool {
    if x.is_zero() {
        return true;
    }
    let v = rational_valuation(x, p).unwrap();
    if v % 2 != 0 {
        return false;
    }
    let unit = x / rat_pow(&BigRational::from_integer((p as i64).into()), v);
    if p == 2 {
        // odd unit is a square in Q_2 iff ≡ 1 mod 8
        residue_of(&unit, 8) == 1
    } else {
        let r = residue_of(&unit, p);
        crate::padic::mod_pow_u64(r, (p - 1) / 2, p) == 1
    }
}

/// unit mod m for a rational with denominator coprime to m.
fn residue_of(x: &BigRational, m: u64) -> u64 {
    use num_bigint::BigInt;
    use num_traits::Signed;
    let mb = BigInt::from(m);
    let mut num = x.numer() % &mb;
    if num.is_negative() {
        num += &mb;
    }
    let mut den = x.denom() % &mb;
    if den.is_negative() {
        den += &mb;
    }
    let num: u64 = num.try_into().unwrap();
    let den: u64 = den.try_into().unwrap();
    // invert den mod m by brute force (m is tiny or prime)
    let inv = (1..m).find(|&d| d * den % m == 1).expect("invertible");
    num * inv % m
}

/// Which regime of the order-two analysis a parameter set falls into.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum K2Regime {
    /// |rho|_p < 1 with lambda(1,1), lambda(-1,1) > 0 and
    /// lambda(1,-1) = lambda(-1,-1) = 0: reduced map f.
    SmallRho,
    /// rho in E_p with b, c != 1: reduced map g.
    EpRegime,
    /// Anything else: the raw TI map, no theorem comparison.
    Generic,
}

#[derive(Debug, Clone, Serialize)]
pub struct K2Analysis {
    pub regime: K2Regime,
    pub census: MeasureCensus,
    /// Expected verdict from the applicable theorem, when one applies.
    pub expected_verdict: Option<PhaseVerdict>,
}

/// The order-two (k = 2) lambda-model analysis: detect the regime, find the
/// fixed points of the reduced map, build the TI fields (h = u^2 via the
/// substitution u = Moebius(h), h = u^2 that reduces the TI equation to the
/// regime map), classify boundedness from the valuation profile, and
/// compare counts and phase verdicts with the applicable theorem.
pub fn lambda_k2_analysis(params: &ModelParams) -> Result<K2Analysis> {
    if params.tree_order != 2 {
        return Err(Error::BadParameter(
            "the order-two analysis requires k = 2".into(),
        ));
    }
    let [l11, l1m, lm1, lmm] = params.interaction.table;
    let v_rho = rational_valuation(&params.rho, params.prime).unwrap();
    let rho_in_ep =
        PAdic::from_rational(&params.rho, params.prime, params.precision)?.in_ep();

    let small_rho_pattern = v_rho > 0 && l11 > 0 && lm1 > 0 && l1m == 0 && lmm == 0;
    let (regime, map) = if small_rho_pattern {
        let a = rat_pow(&params.rho, l11);
        let c = rat_pow(&params.rho, lm1);
        (
            K2Regime::SmallRho,
            RationalMap::small_rho_f(params.prime, &a, &c, params.precision)?,
        )
    } else if rho_in_ep && l11 != l1m && lmm != lm1 {
        let a = rat_pow(&params.rho, l1m - lm1);
        let b = rat_pow(&params.rho, l11 - l1m);
        let c = rat_pow(&params.rho, lmm - lm1);
        (
            K2Regime::EpRegime,
            RationalMap::ep_regime_g(params.prime, &a, &b, &c, params.precision)?,
        )
    } else {
        (K2Regime::Generic, params.ti_map())
    };

    let found = map.fixed_points(&SearchWindow::Auto)?;
    let minus_one = PAdic::from_integer(-1, params.prime, params.precision)?;
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for report in found.reports {
        // the TI field is h = u^2 for the reduced maps, h = u for the raw map
        let field = if map.kind == MapKind::SmallRhoF || map.kind == MapKind::EpRegimeG {
            report.point.mul(&report.point)
        } else {
            report.point.clone()
        };
        if field.congruent_mod(&minus_one, params.precision as i64) {
            excluded.push("field h = -1: no measure".to_string());
            continue;
        }
        let profile = norm_profile(params, &field)?;
        let bounded = if profile.diverges() {
            Boundedness::Unbounded
        } else {
            Boundedness::Bounded
        };
        entries.push(CensusEntry {
            field_literal: field.literal(),
            field,
            regime_point: report.point,
            class: report.class,
            criterion_path: format!(
                "valuation profile {} p^{} by depth {}",
                if bounded == Boundedness::Unbounded {
                    "exceeds"
                } else {
                    "stays within"
                },
                PROFILE_DEPTH,
                PROFILE_DEPTH
            ),
            bounded,
            profile,
        });
    }
    for inc in &found.inconclusive {
        excluded.push(format!(
            "inconclusive residue cluster at valuation {}",
            inc.valuation
        ));
    }

    // theorem comparison per regime
    let (theorem, expected_verdict) = match regime {
        K2Regime::SmallRho => {
            if 2 * l11 > lm1 {
                let minus_c = -rat_pow(&params.rho, lm1);
                let has_sqrt = sqrt_exists_in_qp(&minus_c, params.prime);
                let expected = if has_sqrt { 3 } else { 1 };
                let verdict = if has_sqrt {
                    Some(PhaseVerdict::PhaseTransition)
                } else {
                    None
                };
                (
                    TheoremComparison {
                        applicable: true,
                        description: format!(
                            "2 l(1,1) > l(-1,1): three TI measures iff sqrt(-rho^l(-1,1)) exists (exists: {has_sqrt}); phase transition when it does"
                        ),
                        expected_count: Some(expected),
                        found_count: entries.len(),
                        matches: Some(expected == entries.len()),
                    },
                    verdict,
                )
            } else if 2 * l11 < lm1 {
                (
                    TheoremComparison {
                        applicable: true,
                        description:
                            "2 l(1,1) < l(-1,1): three TI measures unconditionally; quasi phase transition"
                                .into(),
                        expected_count: Some(3),
                        found_count: entries.len(),
                        matches: Some(entries.len() == 3),
                    },
                    Some(PhaseVerdict::QuasiPhaseTransition),
                )
            } else {
                (
                    TheoremComparison {
                        applicable: false,
                        description: "2 l(1,1) = l(-1,1): |A|^2 = |C|, outside the theorem".into(),
                        expected_count: None,
                        found_count: entries.len(),
                        matches: None,
                    },
                    None,
                )
            }
        }
        K2Regime::EpRegime => {
            let three = params.prime % 4 == 1;
            let expected = if three { 3 } else { 1 };
            (
                TheoremComparison {
                    applicable: true,
                    description: format!(
                        "rho in E_p, b, c != 1: three TI measures iff p ≡ 1 (mod 4) (p = {} ≡ {} mod 4); phase transition when so",
                        params.prime,
                        params.prime % 4
                    ),
                    expected_count: Some(expected),
                    found_count: entries.len(),
                    matches: Some(expected == entries.len()),
                },
                if three {
                    Some(PhaseVerdict::PhaseTransition)
                } else {
                    None
                },
            )
        }
        K2Regime::Generic => (
            TheoremComparison {
                applicable: false,
                description: "generic regime: no theorem comparison".into(),
                expected_count: None,
                found_count: entries.len(),
                matches: None,
            },
            None,
        ),
    };

    let verdict = phase_verdict(&entries);
    let measure_equal = measure_equal_pairs(params, &entries);
    let census = MeasureCensus {
        prime: params.prime,
        tree_order: params.tree_order,
        rho: params.rho.to_string(),
        lambda_table: params.interaction.table,
        entries,
        excluded,
        bounded_count: 0,
        unbounded_count: 0,
        theorem,
        verdict,
        measure_equal_pairs: measure_equal,
    }
    .with_counts();
    Ok(K2Analysis {
        regime,
        census,
        expected_verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};

    const PREC: usize = 48;

    fn ising_params(p: u64, k: u8, num: i64, den: i64, coupling: i64) -> ModelParams {
        ModelParams::ising(p, k, rat(num, den), coupling, PREC).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let spec = InteractionSpec::ising(1);
        // k=2, n=1: all +1 -> two edges, each contributing +1
        let h = hamiltonian(2, 1, &[1, 1, 1], &spec).unwrap();
        assert_eq!(h, 2);
        // root +1, leaves -1 -> -2
        let h2 = hamiltonian(2, 1, &[1, -1, -1], &spec).unwrap();
        assert_eq!(h2, -2);
        // global flip leaves the Ising Hamiltonian unchanged
        let h3 = hamiltonian(2, 1, &[-1, 1, 1], &spec).unwrap();
        assert_eq!(h2, h3);
        for cfg in enumerate_configs(2, 2).unwrap() {
            let flipped: Vec<i8> = cfg.iter().map(|s| -s).collect();
            assert_eq!(
                hamiltonian(2, 2, &cfg, &spec).unwrap(),
                hamiltonian(2, 2, &flipped, &spec).unwrap()
            );
        }
    }

    #[test]
    fn partition_function_closed_value() {
        // k=2, n=1, Ising N=1, h=1: Z = 2 (rho + rho^-1)^2
        let params = ising_params(5, 2, 6, 1, 1);
        let field = BoundaryField::ti(PAdic::one(5, PREC));
        let z = partition_function(&params, 1, &field).unwrap();
        let rho = rat(6, 1);
        let expect = rat_int(2) * (&rho + rho.recip()).pow(2);
        let e = PAdic::from_rational(&expect, 5, PREC).unwrap();
        assert!(z.congruent_mod(&e, (PREC - 8) as i64));
    }

    #[test]
    fn zero_field_zero_partition() {
        let params = ising_params(5, 2, 6, 1, 1);
        // h = 0 zeroes only the terms with a +1 boundary spin; the all-minus
        // terms survive under the (1, h) normalization, so Z != 0 here
        let field = BoundaryField::ti(PAdic::zero(5, PREC));
        let z = partition_function(&params, 1, &field).unwrap();
        assert!(!z.is_zero());
        // a genuinely zero partition: h = -1 for k = 1 (single edge):
        // Z = (rho^-N h + rho^N)(h+1) vanishes at h = -1
        let p1 = ModelParams::ising(5, 1, rat(6, 1), 1, PREC).unwrap();
        let f1 = BoundaryField::ti(PAdic::from_integer(-1, 5, PREC).unwrap());
        assert!(matches!(
            partition_function(&p1, 1, &f1),
            Err(Error::ZeroPartition) | Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn cylinder_measures_sum_to_one() {
        let params = ising_params(5, 2, 6, 1, 1);
        for h in [
            PAdic::one(5, PREC),
            PAdic::parse_rational(7, 2, 5, PREC).unwrap(),
        ] {
            let field = BoundaryField::ti(h);
            for n in 1..=2 {
                let configs = enumerate_configs(2, n).unwrap();
                let terms: Vec<PAdic> = configs
                    .iter()
                    .map(|c| cylinder_measure(&params, n, &field, c).unwrap())
                    .collect();
                match sum_padics(terms.iter(), 5) {
                    SumOutcome::Value(total) => {
                        assert!(total.congruent_mod(&PAdic::one(5, PREC), (PREC - 10) as i64))
                    }
                    other => panic!("sum should be 1, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_enumeration() {
        // at a fixed point h of the Ising-Potts map the closed form equals
        // the enumerated measure on every configuration
        let params = ising_params(5, 2, 6, 1, 1);
        let map = params.ti_map();
        let found = map.fixed_points(&SearchWindow::Auto).unwrap();
        for fp in &found.reports {
            let field = BoundaryField::ti(fp.point.clone());
            for n in 1..=2u32 {
                for cfg in enumerate_configs(2, n).unwrap() {
                    let direct = cylinder_measure(&params, n, &field, &cfg).unwrap();
                    let closed = ti_closed_form(&params, n, &fp.point, &cfg).unwrap();
                    assert!(
                        direct.congruent_mod(&closed, (PREC / 2) as i64),
                        "mismatch at n={n}"
                    );
                }
            }
        }
        // depth 3 for one field (2^15 configurations)
        let h = found.reports[0].point.clone();
        let field = BoundaryField::ti(h.clone());
        let z = partition_function(&params, 3, &field).unwrap();
        let idx = TreeIndex::build(2, 3).unwrap();
        let table = WeightTable::new(&params, &field, 3);
        for mask in (0u32..1 << idx.total).step_by(97) {
            let cfg: Vec<i8> = (0..idx.total).map(|i| TreeIndex::spin(mask, i)).collect();
            let direct = table
                .weight(
                    idx.hamiltonian(mask, &params.interaction),
                    idx.boundary_plus_count(mask),
                )
                .unwrap()
                .div(&z)
                .unwrap();
            let closed = ti_closed_form(&params, 3, &h, &cfg).unwrap();
            assert!(direct.congruent_mod(&closed, (PREC / 2) as i64), "mismatch at n=3");
        }
    }

    #[test]
    fn closed_form_rejects_minus_one() {
        let params = ising_params(5, 2, 6, 1, 1);
        let h = PAdic::from_integer(-1, 5, PREC).unwrap();
        assert!(matches!(
            ti_closed_form(&params, 1, &h, &[1, 1, 1]),
            Err(Error::BadField(_))
        ));
    }

    #[test]
    fn compatibility_at_fixed_point_holds() {
        let params = ising_params(5, 2, 6, 1, 1);
        let field = BoundaryField::ti(PAdic::one(5, PREC));
        let rep = check_compatibility(&params, 2, &field).unwrap();
        assert!(rep.holds);
        // non-rational fixed point too
        let map = params.ti_map();
        let found = map.fixed_points(&SearchWindow::Auto).unwrap();
        let h = found.reports[0].point.clone();
        let rep2 =
            check_compatibility(&params, 2, &BoundaryField::ti(h)).unwrap();
        assert!(rep2.holds);
    }

    #[test]
    fn compatibility_fails_for_perturbed_field() {
        let params = ising_params(5, 2, 6, 1, 1);
        // h = 1 + 5 is not a fixed point
        let h = PAdic::parse_rational(6, 1, 5, PREC).unwrap();
        let rep = check_compatibility(&params, 2, &BoundaryField::ti(h)).unwrap();
        assert!(!rep.holds);
        assert!(rep.worst.is_some());
    }

    #[test]
    fn recurrence_rhs_reduces_to_map() {
        let params = ising_params(5, 2, 6, 1, 1);
        let map = params.ti_map();
        let h = PAdic::parse_rational(3, 7, 5, PREC).unwrap();
        let via_rec = recurrence_rhs(
            &params.interaction,
            &params.rho,
            5,
            PREC,
            &[h.clone(), h.clone()],
        )
        .unwrap();
        let via_map = map.evaluate(&h).unwrap();
        assert!(via_rec.congruent_mod(&via_map, (PREC - 10) as i64));
        // symmetric table at h = 1 gives 1
        let sym = InteractionSpec::new([2, 1, 1, 2]);
        let one = PAdic::one(5, PREC);
        let r = recurrence_rhs(&sym, &rat(6, 1), 5, PREC, &[one.clone(), one.clone()]).unwrap();
        assert!(r.congruent_mod(&one, PREC as i64));
        // two distinct children multiply two distinct Moebius factors
        let h2 = PAdic::parse_rational(2, 1, 5, PREC).unwrap();
        let split = recurrence_rhs(&params.interaction, &params.rho, 5, PREC, &[h.clone(), h2.clone()])
            .unwrap();
        let f1 = recurrence_rhs(&params.interaction, &params.rho, 5, PREC, &[h]).unwrap();
        let f2 = recurrence_rhs(&params.interaction, &params.rho, 5, PREC, &[h2]).unwrap();
        assert!(split.congruent_mod(&f1.mul(&f2), (PREC - 10) as i64));
    }

    #[test]
    fn partition_recursion_matches_enumeration() {
        // the subtree recursion used by norm profiles agrees with brute force
        for (spec, rho) in [
            (InteractionSpec::ising(1), rat(6, 1)),
            (InteractionSpec::new([1, 0, 3, 0]), rat(5, 1)),
        ] {
            let params = ModelParams::new(5, 2, rho, spec, PREC).unwrap();
            let h = PAdic::parse_rational(7, 1, 5, PREC).unwrap();
            let field = BoundaryField::ti(h.clone());
            for n in 1..=3u32 {
                let z = partition_function(&params, n, &field).unwrap();
                let vz = partition_valuation_recursive(&params, &h, n).unwrap();
                assert_eq!(z.valuation().unwrap(), vz, "n={n}");
            }
        }
    }

    #[test]
    fn min_numerator_dp_matches_enumeration() {
        let spec = InteractionSpec::new([1, 0, 3, 0]);
        let params = ModelParams::new(5, 2, rat(5, 1), spec, PREC).unwrap();
        let h = PAdic::parse_rational(35, 1, 5, PREC).unwrap(); // v(h) = 1
        let field = BoundaryField::ti(h.clone());
        for n in 1..=3u32 {
            let idx = TreeIndex::build(2, n).unwrap();
            let table = WeightTable::new(&params, &field, n);
            let mut best = i64::MAX;
            for mask in 0u32..1 << idx.total {
                let w = table
                    .weight(
                        idx.hamiltonian(mask, &params.interaction),
                        idx.boundary_plus_count(mask),
                    )
                    .unwrap();
                best = best.min(w.valuation().unwrap());
            }
            let dp = min_numerator_valuation(&params.interaction, 2, 1, 1, n);
            assert_eq!(best, dp, "n={n}");
        }
    }

    #[test]
    fn boundedness_small_rho_is_bounded() {
        let params = ising_params(5, 2, 1, 5, 1);
        let h = PAdic::one(5, PREC);
        let rep = boundedness_classify(&params, &h).unwrap();
        assert_eq!(rep.verdict, Boundedness::Bounded);
        assert!(!rep.profile.diverges());
    }

    #[test]
    fn boundedness_unit_rho_cases() {
        // rho = 6 in E_5: h = 1 bounded (|1 + 36| = 1)
        let params = ising_params(5, 2, 6, 1, 1);
        let rep = boundedness_classify(&params, &PAdic::one(5, PREC)).unwrap();
        assert_eq!(rep.verdict, Boundedness::Bounded);
        // the repelling fixed points are ≡ -1 mod 5, so |h + 36| < 1: unbounded
        let map = params.ti_map();
        let found = map.fixed_points(&SearchWindow::Auto).unwrap();
        let mut unbounded = 0;
        for r in &found.reports {
            if r.class == StabilityClass::Repelling {
                let b = boundedness_classify(&params, &r.point).unwrap();
                assert_eq!(b.verdict, Boundedness::Unbounded);
                assert!(b.profile.diverges());
                unbounded += 1;
            }
        }
        assert_eq!(unbounded, 2);
        // p = 2, |rho|_2 = 1: always unbounded (h = 1, theta = 9)
        let p2 = ising_params(2, 2, 3, 1, 1);
        let rep2 = boundedness_classify(&p2, &PAdic::one(2, PREC)).unwrap();
        assert_eq!(rep2.verdict, Boundedness::Unbounded);
    }

    #[test]
    fn census_large_theta_counts() {
        // (p,k,rho,N) = (5,2,1/5,1): the cleared cubic has three roots in
        // Q_5, none equal to -1, all bounded (|rho| != 1); the published
        // refined formula expects N+2 = 4 and does not match the computed
        // census, which the comparison records.
        let params = ising_params(5, 2, 1, 5, 1);
        let census = ti_census_ising(&params).unwrap();
        assert_eq!(census.entries.len(), 3);
        assert_eq!(census.bounded_count, 3);
        assert_eq!(census.theorem.expected_count, Some(4));
        assert_eq!(census.theorem.matches, Some(false));
        assert_eq!(census.verdict, PhaseVerdict::QuasiPhaseTransition);
        // k = 3: four fixed points, -1 excluded, three measures; formula
        // expects N+1 = 2
        let params3 = ising_params(5, 3, 1, 5, 1);
        let census3 = ti_census_ising(&params3).unwrap();
        assert_eq!(census3.entries.len(), 3);
        assert!(census3.excluded.iter().any(|e| e.contains("-1")));
        assert_eq!(census3.theorem.expected_count, Some(2));
        assert_eq!(census3.theorem.matches, Some(false));
    }

    #[test]
    fn census_ep_phase_transition() {
        // rho = 6 in E_5: 1 bounded + 2 unbounded: a phase transition
        let params = ising_params(5, 2, 6, 1, 1);
        let census = ti_census_ising(&params).unwrap();
        assert_eq!(census.entries.len(), 3);
        assert_eq!(census.bounded_count, 1);
        assert_eq!(census.unbounded_count, 2);
        assert_eq!(census.verdict, PhaseVerdict::PhaseTransition);
        assert!(census.measure_equal_pairs.is_empty());
    }

    #[test]
    fn census_no_transition_when_rho_off_unit() {
        // corollary: no phase transition when p = 2 or |rho|_p != 1
        let params = ising_params(5, 2, 1, 5, 1);
        let census = ti_census_ising(&params).unwrap();
        assert_ne!(census.verdict, PhaseVerdict::PhaseTransition);
        let p2 = ising_params(2, 2, 3, 1, 1);
        let census2 = ti_census_ising(&p2).unwrap();
        assert_ne!(census2.verdict, PhaseVerdict::PhaseTransition);
    }

    #[test]
    fn hm_periodic_fields_m1_and_m2() {
        let params = ising_params(5, 2, 6, 1, 1);
        let ti = hm_periodic_fields(&params, 1).unwrap();
        assert_eq!(ti.len(), 3);
        let per2 = hm_periodic_fields(&params, 2).unwrap();
        assert_eq!(per2.len(), 1);
        // the 2-cycle satisfies h_i = f(h_{i+1}) on re-evaluation
        let map = params.ti_map();
        if let BoundaryField::LevelPeriodic { cycle } = &per2[0] {
            assert_eq!(cycle.len(), 2);
            let f_of_1 = map.evaluate(&cycle[1]).unwrap();
            assert!(f_of_1.congruent_mod(&cycle[0], (PREC / 2) as i64));
            let f_of_0 = map.evaluate(&cycle[0]).unwrap();
            assert!(f_of_0.congruent_mod(&cycle[1], (PREC / 2) as i64));
        } else {
            panic!("expected a level-periodic field");
        }
    }

    #[test]
    fn k2_small_rho_quasi_transition() {
        // p=5, |rho|=1/5, lambda=(1,0,3,0): 2 l11 < lm1: three bounded
        // measures, quasi phase transition
        let params =
            ModelParams::new(5, 2, rat(5, 1), InteractionSpec::new([1, 0, 3, 0]), PREC).unwrap();
        let analysis = lambda_k2_analysis(&params).unwrap();
        assert_eq!(analysis.regime, K2Regime::SmallRho);
        assert_eq!(analysis.census.entries.len(), 3);
        assert_eq!(analysis.census.bounded_count, 3);
        assert_eq!(analysis.census.verdict, PhaseVerdict::QuasiPhaseTransition);
        assert_eq!(
            analysis.expected_verdict,
            Some(PhaseVerdict::QuasiPhaseTransition)
        );
        assert_eq!(analysis.census.theorem.matches, Some(true));
    }

    #[test]
    fn k2_small_rho_phase_transition() {
        // lambda=(3,0,4,0): 2 l11 > lm1 and sqrt(-rho^4) exists at p=5:
        // repelling pair, unbounded measures, phase transition
        let params =
            ModelParams::new(5, 2, rat(5, 1), InteractionSpec::new([3, 0, 4, 0]), PREC).unwrap();
        let analysis = lambda_k2_analysis(&params).unwrap();
        assert_eq!(analysis.census.entries.len(), 3);
        assert_eq!(analysis.census.bounded_count, 1);
        assert_eq!(analysis.census.unbounded_count, 2);
        assert_eq!(analysis.census.verdict, PhaseVerdict::PhaseTransition);
        assert_eq!(analysis.expected_verdict, Some(PhaseVerdict::PhaseTransition));
        assert_eq!(analysis.census.theorem.matches, Some(true));
        // at p=7 the square root fails: a single measure
        let params7 =
            ModelParams::new(7, 2, rat(7, 1), InteractionSpec::new([3, 0, 4, 0]), PREC).unwrap();
        let analysis7 = lambda_k2_analysis(&params7).unwrap();
        assert_eq!(analysis7.census.entries.len(), 1);
        assert_eq!(analysis7.census.theorem.matches, Some(true));
    }

    #[test]
    fn k2_ep_regime_phase_transition() {
        // p=5, rho=6, lambda=(2,1,0,3): a=rho, b=rho, c=rho^3 all in E_5;
        // p ≡ 1 mod 4: three measures, phase transition
        let params =
            ModelParams::new(5, 2, rat(6, 1), InteractionSpec::new([2, 1, 0, 3]), PREC).unwrap();
        let analysis = lambda_k2_analysis(&params).unwrap();
        assert_eq!(analysis.regime, K2Regime::EpRegime);
        assert_eq!(analysis.census.entries.len(), 3);
        assert_eq!(analysis.census.verdict, PhaseVerdict::PhaseTransition);
        assert_eq!(analysis.census.theorem.matches, Some(true));
        // p=7: exactly one TI measure
        let params7 =
            ModelParams::new(7, 2, rat(8, 1), InteractionSpec::new([2, 1, 0, 3]), PREC).unwrap();
        let analysis7 = lambda_k2_analysis(&params7).unwrap();
        assert_eq!(analysis7.census.entries.len(), 1);
        assert_eq!(analysis7.census.verdict, PhaseVerdict::NoTransition);
        assert_eq!(analysis7.census.theorem.matches, Some(true));
    }

    #[test]
    fn k2_fields_satisfy_compatibility() {
        // the squared fixed points really are TI solutions: compatibility
        // holds for each census field
        let params =
            ModelParams::new(5, 2, rat(5, 1), InteractionSpec::new([1, 0, 3, 0]), PREC).unwrap();
        let analysis = lambda_k2_analysis(&params).unwrap();
        for entry in &analysis.census.entries {
            let rep =
                check_compatibility(&params, 2, &BoundaryField::ti(entry.field.clone())).unwrap();
            assert!(rep.holds, "field {} fails compatibility", entry.field);
        }
    }

    #[test]
    fn enumeration_guard_trips() {
        let params = ising_params(5, 2, 6, 1, 1);
        let field = BoundaryField::ti(PAdic::one(5, PREC));
        assert!(matches!(
            partition_function(&params, 5, &field),
            Err(Error::EnumerationGuard(_))
        ));
    }

    #[test]
    fn global_flip_permutes_measures() {
        // Ising, unit h: flipping all spins and replacing h by 1/h permutes
        // the cylinder weights, preserving the total
        let params = ising_params(5, 2, 6, 1, 1);
        let h = PAdic::parse_rational(7, 1, 5, PREC).unwrap();
        let hinv = h.inv().unwrap();
        let f1 = BoundaryField::ti(h);
        let f2 = BoundaryField::ti(hinv);
        let n = 1;
        // Z_{1/h} = Z_h / h^{|W_n|}, and the flipped numerator picks up the
        // same factor, so mu_h(sigma) = mu_{1/h}(-sigma) exactly
        for cfg in enumerate_configs(2, n).unwrap() {
            let flipped: Vec<i8> = cfg.iter().map(|s| -s).collect();
            let m1 = cylinder_measure(&params, n, &f1, &cfg).unwrap();
            let m2 = cylinder_measure(&params, n, &f2, &flipped).unwrap();
            assert!(m1.congruent_mod(&m2, (PREC / 2) as i64));
        }
    }

    #[test]
    fn sqrt_existence() {
        assert!(sqrt_exists_in_qp(&rat(-625, 1), 5)); // v=4 even, -1 is QR mod 5
        assert!(!sqrt_exists_in_qp(&rat(-125, 1), 5)); // odd valuation
        assert!(!sqrt_exists_in_qp(&rat(-2401, 1), 7)); // -1 not QR mod 7
        assert!(sqrt_exists_in_qp(&rat(9, 1), 2)); // 9 ≡ 1 mod 8
        assert!(!sqrt_exists_in_qp(&rat(-1, 1), 2));
    }
}
