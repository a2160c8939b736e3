//! Modular-arithmetic layer: k-th roots of -1 in F_p, the counting formula
//! N_{k,p}, the Sol_p set, existence of k-th roots of -1 in Q_p, Hensel
//! lifting, and a complete root finder for polynomials over Q_p within a
//! valuation window.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{is_prime, mod_inverse, mod_pow_u64, p_pow, rational_valuation, PAdic};
use crate::poly::QpPoly;

/// Residue enumeration refuses primes above this bound.
pub const RESIDUE_ENUMERATION_BOUND: u64 = 1_000_000;

/// Everything the congruence x^k ≡ -1 (mod p) determines.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueReport {
    pub prime: u64,
    pub degree: u64,
    /// All residues x in F_p with x^k ≡ -1.
    pub roots_mod_p: Vec<u64>,
    /// Sol_p(x^k + 1): the roots excluding p - 1.
    pub sol_set: Vec<u64>,
    /// |Sol_p(x^k + 1)|.
    pub kappa_p: usize,
    /// N_{k,p} = gcd(k, p-1) when a root exists, else None.
    pub n_kp: Option<u64>,
    pub exists_in_fp: bool,
    pub exists_in_qp: bool,
}

/// Enumerates the k-th roots of -1 modulo p (p < 10^6).
pub fn kth_roots_of_minus_one_mod_p(p: u64, k: u64) -> Result<ResidueReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 1 {
        return Err(Error::BadParameter("degree k must be >= 1".into()));
    }
    if p > RESIDUE_ENUMERATION_BOUND {
        return Err(Error::EnumerationGuard(format!(
            "residue enumeration requires p <= {RESIDUE_ENUMERATION_BOUND}, got {p}"
        )));
    }
    let minus_one = p - 1;
    let roots: Vec<u64> = (1..p).filter(|&x| mod_pow_u64(x, k, p) == minus_one).collect();
    let sol_set: Vec<u64> = roots.iter().copied().filter(|&x| x != minus_one).collect();
    let exists_in_fp = !roots.is_empty();
    let n_kp = if exists_in_fp {
        Some(k.gcd(&(p - 1)))
    } else {
        None
    };
    Ok(ResidueReport {
        prime: p,
        degree: k,
        kappa_p: sol_set.len(),
        roots_mod_p: roots,
        sol_set,
        n_kp,
        exists_in_fp,
        exists_in_qp: exists_kth_root_minus_one_qp(p, k)?,
    })
}

/// Whether x^k = -1 is solvable in Q_p.
///
/// For odd p, write k = q * p^s with gcd(q, p) = 1: solvable iff a q-th root
/// of -1 exists in F_p, i.e. iff (p-1)/gcd(q, p-1) is even. In Q_2 the
/// equation is solvable exactly when k is odd (-1 is not a square in Q_2).
pub fn exists_kth_root_minus_one_qp(p: u64, k: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 1 {
        return Err(Error::BadParameter("degree k must be >= 1".into()));
    }
    if p == 2 {
        return Ok(k % 2 == 1);
    }
    let mut q = k;
    while q.is_multiple_of(p) {
        q /= p;
    }
    let g = q.gcd(&(p - 1));
    Ok(((p - 1) / g).is_multiple_of(2))
}

/// A residue root that could not be lifted because it is not simple mod p
/// at any refinement level the search reached.
#[derive(Debug, Clone, Serialize)]
pub struct InconclusiveRoot {
    pub valuation: i64,
    /// The digits of the cluster found so far (least significant first).
    pub digit_prefix: Vec<u64>,
}

/// Result of a windowed root search over Q_p.
#[derive(Debug, Clone, Serialize)]
pub struct RootSearch {
    pub roots: Vec<PAdic>,
    pub inconclusive: Vec<InconclusiveRoot>,
}

/// Polynomial with coefficients reduced into Z/p^K (denominators must be
/// coprime to p after the caller has normalized p-content).
struct ModPoly {
    coeffs: Vec<BigUint>,
    modulus: BigUint,
    prime: u64,
}

impl ModPoly {
    fn from_rational(poly: &QpPoly, p: u64, precision: usize) -> ModPoly {
        let modulus = p_pow(p, precision);
        let coeffs = poly
            .coeffs()
            .iter()
            .map(|c| reduce_rational_mod(c, &modulus))
            .collect();
        ModPoly {
            coeffs,
            modulus,
            prime: p,
        }
    }

    fn eval(&self, x: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + c) % &self.modulus;
        }
        acc
    }

    fn eval_derivative(&self, x: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        for (i, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = (acc * x + c * BigUint::from(i)) % &self.modulus;
        }
        acc
    }

    /// q(y) = self(r + p*y), then divided by the p-content of its
    /// coefficients. Returns the shifted polynomial and the content.
    fn shift_and_strip(&self, r: u64) -> (ModPoly, usize) {
        let p = self.prime;
        let n = self.coeffs.len();
        let rb = BigUint::from(r);
        let pb = BigUint::from(p);
        let mut out = vec![BigUint::zero(); n];
        // c * (r + p y)^i expanded by binomials
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut binom = BigUint::from(1u32);
            let mut p_pow_j = BigUint::from(1u32);
            for j in 0..=i {
                let r_pow = rb.pow((i - j) as u32);
                let term = c * &binom * r_pow * &p_pow_j % &self.modulus;
                out[j] = (&out[j] + term) % &self.modulus;
                if j < i {
                    binom = binom * BigUint::from(i - j) / BigUint::from(j + 1);
                    p_pow_j *= &pb;
                }
            }
        }
        // strip p-content
        let prec = self.precision();
        let mut content = prec;
        for c in &out {
            if c.is_zero() {
                continue;
            }
            let mut v = 0usize;
            let mut m = c.clone();
            while v < content {
                let (q, rem) = m.div_rem(&pb);
                if rem.is_zero() {
                    v += 1;
                    m = q;
                } else {
                    break;
                }
            }
            content = content.min(v);
            if content == 0 {
                break;
            }
        }
        let divisor = p_pow(p, content);
        let stripped: Vec<BigUint> = out.iter().map(|c| c / &divisor).collect();
        (
            ModPoly {
                coeffs: stripped,
                modulus: self.modulus.clone(),
                prime: p,
            },
            content,
        )
    }

    fn precision(&self) -> usize {
        // modulus = p^K
        let mut k = 0usize;
        let mut m = self.modulus.clone();
        let pb = BigUint::from(self.prime);
        while m > BigUint::from(1u32) {
            m /= &pb;
            k += 1;
        }
        k
    }
}

fn reduce_rational_mod(c: &BigRational, modulus: &BigUint) -> BigUint {
    if c.is_zero() {
        return BigUint::zero();
    }
    let num = c.numer();
    let den = c.denom().abs().to_biguint().unwrap();
    let num_mod = {
        let m = BigInt::from(modulus.clone());
        let mut r = num % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_biguint().unwrap()
    };
    num_mod * mod_inverse(&(den % modulus), modulus) % modulus
}

/// Refine a simple root of `g` mod p to a root mod p^K by Newton iteration.
fn newton_refine(g: &ModPoly, seed: u64, precision: usize) -> BigUint {
    let mut x = BigUint::from(seed);
    let steps = precision.next_power_of_two().trailing_zeros() + 2;
    for _ in 0..steps {
        let fx = g.eval(&x);
        if fx.is_zero() {
            break;
        }
        let dfx = g.eval_derivative(&x);
        let inv = mod_inverse(&dfx, &g.modulus);
        let delta = fx * inv % &g.modulus;
        x = (&x + &g.modulus - delta) % &g.modulus;
    }
    x
}

/// Lift a simple residue root of an integral polynomial to Z_p.
///
/// Preconditions checked: poly(root) ≡ 0 mod p (else [`Error::NotRootModP`])
/// and poly'(root) ≢ 0 mod p (else [`Error::NotSimpleRoot`]).
pub fn hensel_lift(
    poly: &QpPoly,
    root_mod_p: u64,
    prime: u64,
    target_precision: usize,
) -> Result<PAdic> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    for c in poly.coeffs() {
        if let Some(v) = rational_valuation(c, prime) {
            if v < 0 {
                return Err(Error::BadParameter(
                    "hensel_lift requires p-integral coefficients".into(),
                ));
            }
        }
    }
    let g = ModPoly::from_rational(poly, prime, target_precision);
    let seed = BigUint::from(root_mod_p % prime);
    if !(g.eval(&seed) % prime).is_zero() {
        return Err(Error::NotRootModP {
            residue: root_mod_p % prime,
            prime,
        });
    }
    if (g.eval_derivative(&seed) % prime).is_zero() {
        return Err(Error::NotSimpleRoot {
            residue: root_mod_p % prime,
            prime,
        });
    }
    let lifted = newton_refine(&g, root_mod_p % prime, target_precision);
    if lifted.is_zero() {
        // the root is 0 to the working precision; x - 0 with poly(0)=0
        // only happens for polynomials with zero constant term and then the
        // root is exactly 0
        return Ok(PAdic::zero(prime, target_precision));
    }
    PAdic::from_integer_mod(prime, target_precision, &lifted)
}

/// All roots of `poly` in Q_p whose valuation lies in `window`, found by
/// substituting x = p^v * u, enumerating unit residues of u mod p, and
/// Hensel-lifting simple roots. Residue clusters (non-simple reductions) are
/// split digit by digit; clusters that never become simple within the depth
/// budget are reported as inconclusive rather than silently dropped.
///
/// Roots are returned in deterministic order: by valuation, then by digit
/// sequence.
pub fn poly_roots_qp(
    poly: &QpPoly,
    window: &[i64],
    prime: u64,
    target_precision: usize,
) -> Result<RootSearch> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    if prime > RESIDUE_ENUMERATION_BOUND {
        return Err(Error::EnumerationGuard(format!(
            "root search enumerates residues; requires p <= {RESIDUE_ENUMERATION_BOUND}"
        )));
    }
    if poly.is_zero() {
        return Err(Error::BadParameter(
            "cannot search roots of the zero polynomial".into(),
        ));
    }
    let mut out = RootSearch {
        roots: Vec::new(),
        inconclusive: Vec::new(),
    };
    let mut vals: Vec<i64> = window.to_vec();
    vals.sort_unstable();
    vals.dedup();
    // x = 0 is a root iff the constant coefficient vanishes exactly
    if poly.coeff(0).is_zero() {
        out.roots.push(PAdic::zero(prime, target_precision));
    }
    let max_depth = target_precision.saturating_sub(4).max(4);
    for &v in &vals {
        // b_i = a_i * p^(i v), normalized so min valuation is 0
        let pv = BigRational::from_integer(BigInt::from(prime));
        let scaled: Vec<BigRational> = poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * pv.pow((i as i64 * v) as i32))
            .collect();
        let min_val = scaled
            .iter()
            .filter_map(|c| rational_valuation(c, prime))
            .min()
            .unwrap();
        let normalized: Vec<BigRational> = scaled
            .iter()
            .map(|c| c * pv.pow((-min_val) as i32))
            .collect();
        let g = ModPoly::from_rational(&QpPoly::new(normalized), prime, target_precision);
        // top level: only unit residues (u ≡ 0 mod p belongs to another v)
        for r in 1..prime {
            search_cluster(
                &g,
                r,
                ClusterState {
                    depth: 0,
                    lost_precision: 0,
                    max_depth,
                    valuation: v,
                    target_precision,
                },
                &mut vec![],
                &mut out,
            );
        }
    }
    out.roots.sort_by(|a, b| {
        let va = a.valuation().unwrap_or(i64::MAX);
        let vb = b.valuation().unwrap_or(i64::MAX);
        va.cmp(&vb).then_with(|| a.digits().cmp(&b.digits()))
    });
    Ok(out)
}

#[derive(Clone, Copy)]
struct ClusterState {
    depth: usize,
    /// Sum of the p-contents stripped so far; digits of the working
    /// polynomial above p^(target - lost) are not trustworthy.
    lost_precision: usize,
    max_depth: usize,
    valuation: i64,
    target_precision: usize,
}

/// Examine residue `r` of the unit polynomial `g`; lift if simple, recurse
/// into the cluster x = r + p*y otherwise.
fn search_cluster(
    g: &ModPoly,
    r: u64,
    state: ClusterState,
    prefix: &mut Vec<u64>,
    out: &mut RootSearch,
) {
    let p = g.prime;
    let rb = BigUint::from(r);
    if !(g.eval(&rb) % p).is_zero() {
        return;
    }
    let usable = state.target_precision.saturating_sub(state.lost_precision);
    if !(g.eval_derivative(&rb) % p).is_zero() {
        if usable < 2 {
            let mut digits = prefix.clone();
            digits.push(r);
            out.inconclusive.push(InconclusiveRoot {
                valuation: state.valuation,
                digit_prefix: digits,
            });
            return;
        }
        // simple: Newton-refine (valid mod p^usable), then reassemble
        // p^v * (prefix + p^depth * u)
        let u = newton_refine(g, r, usable) % p_pow(p, usable);
        let mut unit = BigUint::zero();
        for &d in prefix.iter().rev() {
            unit = unit * p + d;
        }
        unit += u * p_pow(p, state.depth);
        let abs_precision = usable + state.depth;
        if let Ok(root_unit) = PAdic::from_integer_mod(p, abs_precision, &unit) {
            let shifted_val = state.valuation + root_unit.valuation().unwrap();
            let reanchored = PAdic::from_parts(
                p,
                root_unit.precision().min(state.target_precision),
                shifted_val,
                root_unit.unit().unwrap().clone(),
            );
            out.roots.push(reanchored);
        }
        return;
    }
    if state.depth >= state.max_depth || usable < 2 {
        let mut digits = prefix.clone();
        digits.push(r);
        out.inconclusive.push(InconclusiveRoot {
            valuation: state.valuation,
            digit_prefix: digits,
        });
        return;
    }
    let (shifted, content) = g.shift_and_strip(r);
    prefix.push(r);
    for r2 in 0..p {
        search_cluster(
            &shifted,
            r2,
            ClusterState {
                depth: state.depth + 1,
                lost_precision: state.lost_precision + content,
                ..state
            },
            prefix,
            out,
        );
    }
    prefix.pop();
}
