//! The semi-infinite Cayley tree of order k: coordinates, level sets, the
//! concatenation semigroup, translations, and the level-congruence
//! subsemigroups G_m.
//!
//! The root is the empty coordinate sequence and has k direct successors,
//! so |W_n| = k^n for every n >= 1.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TreeAddress {
    /// Coordinates i_1..i_n, each in 1..=k; empty for the root.
    pub path: Vec<u8>,
    pub order: u8,
}

impl TreeAddress {
    pub fn root(order: u8) -> TreeAddress {
        TreeAddress {
            path: vec![],
            order,
        }
    }

    pub fn new(order: u8, path: Vec<u8>) -> Result<TreeAddress> {
        if path.iter().any(|&i| i < 1 || i > order) {
            return Err(Error::BadParameter(format!(
                "coordinates must lie in 1..={order}"
            )));
        }
        Ok(TreeAddress { path, order })
    }

    /// Distance to the root.
    pub fn level(&self) -> usize {
        self.path.len()
    }

    /// Direct successors S(x): one symbol appended.
    pub fn successors(&self) -> Vec<TreeAddress> {
        (1..=self.order)
            .map(|i| {
                let mut path = self.path.clone();
                path.push(i);
                TreeAddress {
                    path,
                    order: self.order,
                }
            })
            .collect()
    }

    /// The semigroup operation: x ∘ y appends y's coordinates to x's.
    /// Noncommutative for distinct nonempty addresses.
    pub fn concat(&self, other: &TreeAddress) -> TreeAddress {
        assert_eq!(self.order, other.order, "trees of different order");
        let mut path = self.path.clone();
        path.extend_from_slice(&other.path);
        TreeAddress {
            path,
            order: self.order,
        }
    }

    /// Membership in G_m = { x : d(x, root) ≡ 0 mod m }.
    pub fn in_gm(&self, m: usize) -> bool {
        assert!(m >= 1);
        self.level().is_multiple_of(m)
    }
}

/// The translation tau_g(x) = g ∘ x.
pub fn translate(g: &TreeAddress, x: &TreeAddress) -> TreeAddress {
    g.concat(x)
}

/// |W_n| = k^n (1 for n = 0).
pub fn sphere_size(k: u8, n: u32) -> u128 {
    (k as u128).pow(n)
}

/// |V_n| = 1 + k + ... + k^n.
pub fn ball_size(k: u8, n: u32) -> u128 {
    (0..=n).map(|j| sphere_size(k, j)).sum()
}

/// |L_n| = number of edges among V_n = |V_n| - 1 = k (k^n - 1)/(k - 1)
/// for k >= 2, and n for k = 1.
pub fn edge_count(k: u8, n: u32) -> u128 {
    ball_size(k, n) - 1
}

/// All vertices of V_n in breadth-first order (the root first). Guarded so
/// enumeration stays at desk scale.
pub fn enumerate_ball(k: u8, n: u32) -> Result<Vec<TreeAddress>> {
    let size = ball_size(k, n);
    if size > 1 << 20 {
        return Err(Error::EnumerationGuard(format!(
            "|V_{n}| = {size} is too large to enumerate"
        )));
    }
    let mut out = vec![TreeAddress::root(k)];
    let mut frontier = vec![TreeAddress::root(k)];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &frontier {
            for s in v.successors() {
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// All vertices of W_n.
pub fn enumerate_sphere(k: u8, n: u32) -> Result<Vec<TreeAddress>> {
    Ok(enumerate_ball(k, n)?
        .into_iter()
        .filter(|v| v.level() == n as usize)
        .collect())
}
