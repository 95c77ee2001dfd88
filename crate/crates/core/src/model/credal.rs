use std::fmt;

/// Absolute tolerance used for simplex membership and feasibility checks.
pub const PROB_TOL: f64 = 1e-9;

/// A closed convex set of categorical distributions for one CPD row.
///
/// `Box` is always read as the intersection of the per-outcome interval box with
/// the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub enum CredalSet {
    Point(Vec<f64>),
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Vertices(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CredalIssue {
    Empty,
    DimensionMismatch,
    NotNormalized,
    OutOfRange,
    Inverted,
}

impl fmt::Display for CredalIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CredalIssue::Empty => "empty credal set",
            CredalIssue::DimensionMismatch => "dimension mismatch",
            CredalIssue::NotNormalized => "probability vector does not sum to 1",
            CredalIssue::OutOfRange => "probability outside [0,1]",
            CredalIssue::Inverted => "lower bound exceeds upper bound",
        })
    }
}

fn check_distribution(p: &[f64]) -> Result<(), CredalIssue> {
    if p.iter().any(|x| !x.is_finite() || *x < -PROB_TOL || *x > 1.0 + PROB_TOL) {
        return Err(CredalIssue::OutOfRange);
    }
    if (p.iter().sum::<f64>() - 1.0).abs() > PROB_TOL {
        return Err(CredalIssue::NotNormalized);
    }
    Ok(())
}

impl CredalSet {
    pub fn point(p: impl Into<Vec<f64>>) -> Self {
        CredalSet::Point(p.into())
    }

    pub fn interval(lower: impl Into<Vec<f64>>, upper: impl Into<Vec<f64>>) -> Self {
        CredalSet::Box {
            lower: lower.into(),
            upper: upper.into(),
        }
    }

    /// Binary row with the first outcome's probability in `[lo, hi]`.
    pub fn binary_interval(lo: f64, hi: f64) -> Self {
        Self::interval([lo, 1.0 - hi], [hi, 1.0 - lo])
    }

    /// The whole simplex over `k` outcomes.
    pub fn full_simplex(k: usize) -> Self {
        Self::interval(vec![0.0; k], vec![1.0; k])
    }

    /// Point mass on outcome `i` of `k`.
    pub fn point_mass(k: usize, i: usize) -> Self {
        let mut p = vec![0.0; k];
        p[i] = 1.0;
        CredalSet::Point(p)
    }

    pub fn dim(&self) -> usize {
        match self {
            CredalSet::Point(p) => p.len(),
            CredalSet::Box { lower, .. } => lower.len(),
            CredalSet::Vertices(vs) => vs.first().map_or(0, Vec::len),
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, CredalSet::Point(_))
    }

    pub fn as_point(&self) -> Option<&[f64]> {
        match self {
            CredalSet::Point(p) => Some(p),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), CredalIssue> {
        match self {
            CredalSet::Point(p) => check_distribution(p),
            CredalSet::Box { lower, upper } => {
                if lower.len() != upper.len() || lower.is_empty() {
                    return Err(CredalIssue::DimensionMismatch);
                }
                let in_range = |x: &f64| x.is_finite() && *x >= -PROB_TOL && *x <= 1.0 + PROB_TOL;
                if !lower.iter().chain(upper).all(in_range) {
                    return Err(CredalIssue::OutOfRange);
                }
                if lower.iter().zip(upper).any(|(l, u)| l > u) {
                    return Err(CredalIssue::Inverted);
                }
                let (sl, su): (f64, f64) = (lower.iter().sum(), upper.iter().sum());
                if sl > 1.0 + PROB_TOL || su < 1.0 - PROB_TOL {
                    return Err(CredalIssue::Empty);
                }
                Ok(())
            }
            CredalSet::Vertices(vs) => {
                let Some(first) = vs.first() else {
                    return Err(CredalIssue::Empty);
                };
                if vs.iter().any(|v| v.len() != first.len()) {
                    return Err(CredalIssue::DimensionMismatch);
                }
                vs.iter().try_for_each(|v| check_distribution(v))
            }
        }
    }

    /// Membership test within `tol`.
    pub fn contains(&self, w: &[f64], tol: f64) -> bool {
        if w.len() != self.dim() || (w.iter().sum::<f64>() - 1.0).abs() > tol {
            return false;
        }
        match self {
            CredalSet::Point(p) => p.iter().zip(w).all(|(a, b)| (a - b).abs() <= tol),
            CredalSet::Box { lower, upper } => w
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(x, (l, u))| *x >= l - tol && *x <= u + tol),
            CredalSet::Vertices(vs) => {
                if vs
                    .iter()
                    .any(|v| v.iter().zip(w).all(|(a, b)| (a - b).abs() <= tol))
                {
                    return true;
                }
                hull_distance_sq(vs, w) <= tol * tol
            }
        }
    }

    /// True for the box encoding of the whole simplex.
    pub fn is_full_simplex(&self) -> bool {
        match self {
            CredalSet::Box { lower, upper } => {
                lower.iter().all(|&l| l <= PROB_TOL) && upper.iter().all(|&u| u >= 1.0 - PROB_TOL)
            }
            _ => false,
        }
    }
}

/// Squared distance from `w` to the convex hull of `vs`, by Wolfe's
/// minimum-norm-point algorithm on the shifted points `v - w`.
fn hull_distance_sq(vs: &[Vec<f64>], w: &[f64]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let pts: Vec<Vec<f64>> = vs
        .iter()
        .map(|v| v.iter().zip(w).map(|(a, b)| a - b).collect())
        .collect();
    let scale = pts.iter().map(|p| dot(p, p)).fold(0.0, f64::max).max(1e-300);
    let combine = |set: &[usize], lambda: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; w.len()];
        for (&i, l) in set.iter().zip(lambda) {
            for (xi, pi) in x.iter_mut().zip(&pts[i]) {
                *xi += l * pi;
            }
        }
        x
    };
    let first = (0..pts.len())
        .min_by(|&a, &b| dot(&pts[a], &pts[a]).total_cmp(&dot(&pts[b], &pts[b])))
        .expect("nonempty vertex list");
    let mut set = vec![first];
    let mut lambda = vec![1.0];
    let mut x = pts[first].clone();
    for _ in 0..1000 {
        let xx = dot(&x, &x);
        let j = (0..pts.len())
            .min_by(|&a, &b| dot(&pts[a], &x).total_cmp(&dot(&pts[b], &x)))
            .expect("nonempty");
        if xx - dot(&pts[j], &x) <= 1e-14 * scale || set.contains(&j) {
            return xx;
        }
        set.push(j);
        lambda.push(0.0);
        loop {
            let Some(alpha) = affine_minimizer(&pts, &set) else {
                return dot(&x, &x);
            };
            if alpha.iter().all(|&a| a > 1e-14) {
                lambda = alpha;
                x = combine(&set, &lambda);
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= 1e-14)
                .map(|(&l, &a)| l / (l - a))
                .fold(1.0, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let keep: Vec<usize> = (0..set.len()).filter(|&i| lambda[i] > 1e-14).collect();
            set = keep.iter().map(|&i| set[i]).collect();
            lambda = keep.iter().map(|&i| lambda[i]).collect();
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
            x = combine(&set, &lambda);
        }
    }
    dot(&x, &x)
}

/// Affine weights (summing to 1) of the minimum-norm point in the affine hull
/// of `pts[set]`; `None` when the points are affinely dependent.
fn affine_minimizer(pts: &[Vec<f64>], set: &[usize]) -> Option<Vec<f64>> {
    let n = set.len();
    // [G 1; 1ᵀ 0] [α; μ] = [0; 1]
    let mut m = vec![vec![0.0; n + 2]; n + 1];
    for (r, &i) in set.iter().enumerate() {
        for (c, &k) in set.iter().enumerate() {
            m[r][c] = pts[i].iter().zip(&pts[k]).map(|(a, b)| a * b).sum();
        }
        m[r][n] = 1.0;
        m[n][r] = 1.0;
    }
    m[n][n + 1] = 1.0;
    for col in 0..=n {
        let pivot = (col..=n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-18 {
            return None;
        }
        m.swap(col, pivot);
        for r in 0..=n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..n + 2 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..n).map(|r| m[r][n + 1] / m[r][r]).collect())
}
