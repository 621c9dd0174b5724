//! Area-conditioned ratios, maximal numbers of homologous cylinders, and the
//! simple-surfaces predicate.

use std::fmt;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{incomplete_beta_ratio, rat, Rational};
use crate::strata::QuadStratum;

/// Largest integer whose partitions are enumerated exhaustively.
pub const PARTITION_CAP: u32 = 40;
/// Largest number of subsets visited by the brute-force search.
pub const SUBSET_CAP: u64 = 1 << 20;

fn check_p(p: &Rational) -> Result<()> {
    if p.is_negative() || p > &Rational::one() {
        return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `c_{A>p}(C) / c(C) = B(1-p; n_S, q) / B(n_S, q)`.
pub fn ratio_area_gt_p(n_s: u32, q: u32, p: &Rational) -> Result<Rational> {
    incomplete_beta_ratio(p, n_s, q)
}

/// `c_{A1>p}(C) / c(C) = (1-p)^(d-2)` for a single cylinder.
pub fn ratio_single_cyl_gt_p(d: u32, p: &Rational) -> Result<Rational> {
    if d < 3 {
        return Err(Error::Domain(format!("dimension {d} < 3")));
    }
    check_p(p)?;
    Ok(num_traits::pow(Rational::one() - p, (d - 2) as usize))
}

/// A stratum written as `(4l_1..4l_m, 4k_1+2..4k_n+2, b_1..b_p, -1^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QmaxInput {
    pub l_values: Vec<u32>,
    pub k_values: Vec<u32>,
    pub odd_orders: Vec<u32>,
    pub k: u32,
}

impl QmaxInput {
    pub fn from_orders(orders: &[i32]) -> Result<Self> {
        let mut out = QmaxInput { l_values: vec![], k_values: vec![], odd_orders: vec![], k: 0 };
        for &a in orders {
            match a {
                -1 => out.k += 1,
                a if a <= 0 => return Err(Error::InvalidStratum(format!("order {a} not allowed"))),
                a if a % 4 == 0 => out.l_values.push(a as u32 / 4),
                a if a % 4 == 2 => out.k_values.push((a as u32 - 2) / 4),
                a => out.odd_orders.push(a as u32),
            }
        }
        Ok(out)
    }

    pub fn from_stratum(s: &QuadStratum) -> Self {
        Self::from_orders(s.orders()).expect("validated stratum")
    }

    pub fn m(&self) -> usize {
        self.l_values.len()
    }

    pub fn n(&self) -> usize {
        self.k_values.len()
    }

    pub fn odd_sum(&self) -> i64 {
        self.odd_orders.iter().map(|&b| b as i64).sum()
    }

    /// `2n + sum b - k + 4`.
    pub fn slack(&self) -> i64 {
        2 * self.n() as i64 + self.odd_sum() - self.k as i64 + 4
    }

    pub fn closed_form_applies(&self) -> bool {
        self.slack() >= 0
    }

    pub fn to_stratum(&self) -> Result<QuadStratum> {
        let mut orders: Vec<i32> = self.l_values.iter().map(|&l| 4 * l as i32).collect();
        orders.extend(self.k_values.iter().map(|&k| 4 * k as i32 + 2));
        orders.extend(self.odd_orders.iter().map(|&b| b as i32));
        orders.extend(std::iter::repeat_n(-1, self.k as usize));
        QuadStratum::new(orders)
    }

    /// `max |I| + |J|/2` over `I`, `J` with `|J|` even and
    /// `4 sum_I l + 4 sum_J k + slack >= 0`; `None` when nothing qualifies.
    pub fn subset_search(&self) -> Option<u32> {
        let (m, n) = (self.m(), self.n());
        let slack = self.slack();
        let mut best: Option<u32> = None;
        for i_mask in 0u64..(1u64 << m) {
            let li: i64 = (0..m).filter(|b| i_mask >> b & 1 == 1).map(|b| self.l_values[b] as i64).sum();
            let i_count = i_mask.count_ones();
            for j_mask in 0u64..(1u64 << n) {
                let j_count = j_mask.count_ones();
                if j_count % 2 == 1 {
                    continue;
                }
                let kj: i64 = (0..n).filter(|b| j_mask >> b & 1 == 1).map(|b| self.k_values[b] as i64).sum();
                if 4 * li + 4 * kj + slack >= 0 {
                    let v = i_count + j_count / 2;
                    best = Some(best.map_or(v, |b| b.max(v)));
                }
            }
        }
        best
    }

    /// Same maximum as [`subset_search`](Self::subset_search), testing only the
    /// largest index sets.
    pub fn greedy(&self) -> Option<u32> {
        let mut ks = self.k_values.clone();
        ks.sort_unstable();
        let j = if ks.len() % 2 == 1 { &ks[1..] } else { &ks[..] };
        let lhs = 4 * self.l_values.iter().map(|&l| l as i64).sum::<i64>()
            + 4 * j.iter().map(|&k| k as i64).sum::<i64>()
            + self.slack();
        (lhs >= 0).then(|| (self.m() + self.n() / 2) as u32)
    }

    fn subset_count(&self) -> u64 {
        1u64.checked_shl((self.m() + self.n()) as u32).unwrap_or(u64::MAX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QmaxMethod {
    ClosedForm,
    SubsetSearch,
}

impl fmt::Display for QmaxMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QmaxMethod::ClosedForm => "closed_form",
            QmaxMethod::SubsetSearch => "subset_search",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QmaxResult {
    /// Reduced maximum `q_max - eps` with `eps` in {0, 1, 2}.
    pub value: u32,
    pub method: QmaxMethod,
    /// Bounds on `q_max` itself.
    pub interval: (u32, u32),
    /// False when no index set satisfies the constraint; `value` is then 0.
    pub satisfiable: bool,
}

/// Reduced maximal number of homologous cylinders in `Q(alpha)`, genus >= 1.
pub fn qmax_tilde(s: &QuadStratum) -> Result<QmaxResult> {
    if s.genus() < 1 {
        return Err(Error::Domain(format!("{s} has genus 0: at most one cylinder")));
    }
    if s.is_empty() {
        return Err(Error::EmptyStratum(s.to_string()));
    }
    let input = QmaxInput::from_stratum(s);
    let small = input.subset_count() <= SUBSET_CAP;
    let (value, method) = if input.closed_form_applies() {
        let v = (input.m() + input.n() / 2) as u32;
        if small {
            let searched = input.subset_search();
            if searched != Some(v) {
                return Err(Error::Domain(format!("closed form {v} and subset search {searched:?} disagree on {s}")));
            }
        }
        (Some(v), QmaxMethod::ClosedForm)
    } else if small {
        (input.subset_search(), QmaxMethod::SubsetSearch)
    } else {
        (input.greedy(), QmaxMethod::SubsetSearch)
    };
    let v = value.unwrap_or(0);
    Ok(QmaxResult { value: v, method, interval: (v, v + 2), satisfiable: value.is_some() })
}

/// Partitions of `n` into positive parts, each in nonincreasing order, listed
/// in reverse lexicographic order.
pub fn partitions(n: u32) -> Result<Vec<Vec<u32>>> {
    if n > PARTITION_CAP {
        return Err(Error::Domain(format!("partitions of {n} exceed the cap {PARTITION_CAP}")));
    }
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    Ok(out)
}

fn with_poles(parts: &[u32], k: u32) -> Vec<i32> {
    parts.iter().map(|&p| p as i32).chain(std::iter::repeat_n(-1, k as usize)).collect()
}

fn raw_qmax(orders: &[i32]) -> u32 {
    let input = QmaxInput::from_orders(orders).expect("positive parts and poles");
    if input.subset_count() <= SUBSET_CAP { input.subset_search() } else { input.greedy() }.unwrap_or(0)
}

/// `max over alpha in Pi(4g-4+k) of q~_max(alpha, -1^k) = g + floor(k/4) - 1`;
/// with `exhaustive` every partition is also searched.
pub fn qmax_partition_max(g: u32, k: u32, exhaustive: bool) -> Result<u32> {
    if g < 1 {
        return Err(Error::Domain("genus must be >= 1".into()));
    }
    let closed = g + k / 4 - 1;
    if exhaustive {
        let searched = partitions(4 * g - 4 + k)?.iter().map(|p| raw_qmax(&with_poles(p, k))).max().unwrap_or(0);
        if searched != closed {
            return Err(Error::Domain(format!("exhaustive maximum {searched} differs from {closed} at g={g}, k={k}")));
        }
    }
    Ok(closed)
}

fn dim_ratio(parts: &[u32], g: u32, k: u32) -> Option<Rational> {
    let den = 2 * g as i64 - 3 + parts.len() as i64 + k as i64;
    (den > 0).then(|| rat(raw_qmax(&with_poles(parts, k)) as i64, den))
}

/// Largest `q~_max / (2g - 3 + l(alpha) + k)` over the family of all-4
/// partitions completed by a partition of `k mod 4`.
pub fn qmax_dim_ratio(g: u32, k: u32) -> Result<Rational> {
    if g < 1 {
        return Err(Error::Domain("genus must be >= 1".into()));
    }
    let rem = k % 4;
    let fours = vec![4; ((4 * g - 4 + k - rem) / 4) as usize];
    partitions(rem)?
        .into_iter()
        .filter_map(|p| {
            let mut parts = fours.clone();
            parts.extend(p);
            dim_ratio(&parts, g, k)
        })
        .max()
        .ok_or_else(|| Error::Domain(format!("no admissible partition at g={g}, k={k}")))
}

/// The same maximum over every partition of `4g - 4 + k`.
pub fn qmax_dim_ratio_exhaustive(g: u32, k: u32) -> Result<Rational> {
    if g < 1 {
        return Err(Error::Domain("genus must be >= 1".into()));
    }
    partitions(4 * g - 4 + k)?
        .iter()
        .filter_map(|p| dim_ratio(p, g, k))
        .max()
        .ok_or_else(|| Error::Domain(format!("no admissible partition at g={g}, k={k}")))
}

/// Whether a component of `s` can contain a configuration made only of tori
/// and cylinders.
pub fn simple_surfaces_possible(s: &QuadStratum, is_hyperelliptic_component: bool) -> bool {
    !s.is_empty() && !is_hyperelliptic_component && s.orders().iter().all(|&a| a > 0 && a % 2 == 0)
}
