//! Unfolding plans: exact parameter assignments realizing an alternating
//! ladder of focal coefficients.
//!
//! For a Liénard family whose parameters enter `f` linearly, the map from
//! parameters to the odd focal coefficients `B_1, B_3, ..., B_{2k+1}` is an
//! exact rational linear map (the involution `alpha` depends only on `g`).
//! A plan solves that map against ladder targets with alternating signs and
//! accelerating magnitude gaps, the configuration that splits one cycle off
//! per rung.

use num::{One, Signed, Zero};

use nilcycle_core::focal::build_lienard;
use nilcycle_core::rational::{rat_int, Rational};
use nilcycle_core::series::Series;

use crate::CliError;

/// A Liénard family `x' = y, y' = -g - y (base_f + sum_j c_j x^{d_j})`.
#[derive(Clone, Debug)]
pub struct LienardFamily {
    pub g: Series,
    pub base_f: Series,
    /// Degrees `d_j` of the free parameters in `f`.
    pub param_degrees: Vec<usize>,
    pub order: usize,
}

impl LienardFamily {
    /// The `(x^3 + x^5)` family with parameters `b_0, b_2, ..., b_{2k}`.
    pub fn family_43(k: usize, order: usize) -> LienardFamily {
        LienardFamily {
            g: Series::from_terms(&[(3, 1, 1), (5, 1, 1)], order),
            base_f: Series::zero(order),
            param_degrees: (0..=k).map(|j| 2 * j).collect(),
            order,
        }
    }

    pub fn param_name(&self, j: usize) -> String {
        format!("b{}", self.param_degrees[j])
    }

    /// Assembles `f` from parameter values.
    pub fn f_with(&self, values: &[Rational]) -> Series {
        let mut f = self.base_f.clone();
        for (deg, v) in self.param_degrees.iter().zip(values) {
            f = f + Series::monomial(v.clone(), *deg, self.order);
        }
        f
    }
}

#[derive(Clone, Debug)]
pub struct UnfoldingPlan {
    pub target_count: usize,
    pub eps: Rational,
    pub ratio: Rational,
    pub top_sign: i32,
    /// Parameter name -> exact value.
    pub assignments: Vec<(String, Rational)>,
    /// Realized focal coefficients at the odd ladder indices, recomputed
    /// exactly through the focal pipeline.
    pub realized_b: Vec<(usize, Rational)>,
    /// Finite-difference rank estimate of the focal-value Jacobian, when
    /// requested.
    pub jacobian_rank: Option<usize>,
}

impl UnfoldingPlan {
    /// Ladder validity: alternating signs and `|B_lower| <= ratio |B_next|`
    /// down the ladder (exact rational comparisons).
    pub fn ladder_valid(&self) -> bool {
        let mut prev: Option<&Rational> = None;
        // realized_b is stored top index first.
        for (_, b) in &self.realized_b {
            if b.is_zero() {
                return false;
            }
            if let Some(p) = prev {
                if (p * b).is_positive() {
                    return false; // same sign
                }
                if (b.abs() - self.ratio.clone() * p.abs()).is_positive() {
                    return false; // not small enough
                }
            }
            prev = Some(b);
        }
        true
    }
}

/// Exact odd focal coefficients `B_1, B_3, ..., B_{2k+1}` of the family at
/// given parameter values.
pub fn odd_b_values(family: &LienardFamily, values: &[Rational], k: usize) -> Result<Vec<Rational>, CliError> {
    let f = family.f_with(values);
    let data = build_lienard(&family.g, &f)
        .map_err(|e| CliError::Input(format!("family rejected: {e}")))?;
    let report = nilcycle_core::focal::focal_b(&data)
        .map_err(|e| CliError::Input(format!("focal pipeline failed: {e}")))?;
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let idx = 2 * i + 1;
        if idx > report.b.len() {
            return Err(CliError::UnachievableLadder(format!(
                "working order too low to reach B_{idx}"
            )));
        }
        out.push(report.b[idx - 1].clone());
    }
    Ok(out)
}

/// Solves for parameter values realizing the alternating ladder
/// `B_{2k+1} = sign * eps`, then each rung below smaller by an extra factor
/// of `ratio` per level and opposite in sign:
/// `B_{2(k-i)+1} = (-1)^i sign * eps * ratio^{i(i+1)/2}`.
pub fn unfold(
    family: &LienardFamily,
    k: usize,
    eps: &Rational,
    ratio: &Rational,
    top_sign: i32,
) -> Result<UnfoldingPlan, CliError> {
    if !eps.is_positive() || !ratio.is_positive() || ratio >= &Rational::one() {
        return Err(CliError::Config(
            "eps must be positive and ratio in (0,1)".into(),
        ));
    }
    if top_sign != 1 && top_sign != -1 {
        return Err(CliError::Config("top sign must be +1 or -1".into()));
    }
    if k == 0 {
        return Ok(UnfoldingPlan {
            target_count: 0,
            eps: eps.clone(),
            ratio: ratio.clone(),
            top_sign,
            assignments: vec![],
            realized_b: vec![],
            jacobian_rank: None,
        });
    }
    let n_targets = k + 1;
    if family.param_degrees.len() < n_targets {
        return Err(CliError::UnachievableLadder(format!(
            "{} parameters cannot hit {n_targets} ladder rungs",
            family.param_degrees.len()
        )));
    }

    // Exact linear map: column j = odd B-values of the unit parameter.
    let zero = vec![Rational::zero(); family.param_degrees.len()];
    let offset = odd_b_values(family, &zero, k)?;
    let mut columns = Vec::new();
    for j in 0..family.param_degrees.len() {
        let mut unit = zero.clone();
        unit[j] = Rational::one();
        let b = odd_b_values(family, &unit, k)?;
        let col: Vec<Rational> = b.iter().zip(&offset).map(|(x, o)| x - o).collect();
        columns.push(col);
    }

    // Ladder targets, top index down: B_{2k+1-2i} = (-1)^i s eps ratio^{T_i}.
    let mut targets = vec![Rational::zero(); n_targets];
    let sign0 = rat_int(top_sign as i64);
    for i in 0..n_targets {
        let tri = i * (i + 1) / 2;
        let mut mag = eps.clone();
        for _ in 0..tri {
            mag = mag * ratio.clone();
        }
        let sgn = if i % 2 == 0 { sign0.clone() } else { -sign0.clone() };
        // i counts down from the top index 2k+1.
        targets[k - i] = sgn * mag;
    }
    let rhs: Vec<Rational> = targets
        .iter()
        .zip(&offset)
        .map(|(t, o)| t - o)
        .collect();

    let solution = solve_exact(&columns, &rhs).ok_or_else(|| {
        CliError::UnachievableLadder("parameter-to-B map is singular at this order".into())
    })?;

    let realized = odd_b_values(family, &solution, k)?;
    let mut realized_b: Vec<(usize, Rational)> = realized
        .iter()
        .enumerate()
        .map(|(i, b)| (2 * i + 1, b.clone()))
        .collect();
    realized_b.reverse(); // top index first

    Ok(UnfoldingPlan {
        target_count: k,
        eps: eps.clone(),
        ratio: ratio.clone(),
        top_sign,
        assignments: family
            .param_degrees
            .iter()
            .enumerate()
            .map(|(j, _)| (family.param_name(j), solution[j].clone()))
            .collect(),
        realized_b,
        jacobian_rank: None,
    })
}

/// Gaussian elimination over the rationals; `columns[j][i]` is entry (i, j).
/// Returns any solution of the (possibly wide) system, or `None` when the
/// targets are not in the column span.
fn solve_exact(columns: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let cols = columns.len();
    // Augmented row-major matrix.
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = (0..cols).map(|j| columns[j][i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..=cols {
                    let sub = factor.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent when a zero row has nonzero rhs.
    for row in m.iter().skip(r) {
        if row[..cols].iter().all(|v| v.is_zero()) && !row[cols].is_zero() {
            return None;
        }
    }
    if r < rows {
        return None;
    }
    let mut solution = vec![Rational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        solution[c] = m[i][cols].clone();
    }
    Some(solution)
}
