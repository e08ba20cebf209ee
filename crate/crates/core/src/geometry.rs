//! Euclidean projection onto the simplex, the prox map, and diameters.

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("cannot project an empty vector")]
    Empty,
    #[error("coordinate {index} is not finite")]
    NonFinite { index: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Nearest point of the probability simplex in the Euclidean norm (sort-and-threshold).
///
/// ```
/// let p = smoothlearn::geometry::project_simplex(&[0.4, 0.4]).unwrap();
/// assert_eq!(p, vec![0.5, 0.5]);
/// ```
pub fn project_simplex(v: &[f64]) -> Result<Vec<f64>, GeometryError> {
    let mut out = vec![0.0; v.len()];
    project_simplex_into(v, &mut out)?;
    Ok(out)
}

/// Same as [`project_simplex`], writing into `out`.
pub fn project_simplex_into(v: &[f64], out: &mut [f64]) -> Result<(), GeometryError> {
    if v.is_empty() {
        return Err(GeometryError::Empty);
    }
    if out.len() != v.len() {
        return Err(GeometryError::DimensionMismatch { left: v.len(), right: out.len() });
    }
    if let Some(index) = v.iter().position(|x| !x.is_finite()) {
        return Err(GeometryError::NonFinite { index });
    }
    // Points already on the simplex come back untouched.
    if v.iter().all(|&x| x >= 0.0) && (v.iter().sum::<f64>() - 1.0).abs() <= 1e-14 {
        out.copy_from_slice(v);
        return Ok(());
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &s) in sorted.iter().enumerate() {
        cumsum += s;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if s - t > 0.0 {
            theta = t;
        }
    }
    for (o, &x) in out.iter_mut().zip(v) {
        let y = x - theta;
        *o = if y < -1e-12 { 0.0 } else { y.max(0.0) };
    }
    let sum: f64 = out.iter().sum();
    if sum != 1.0 {
        out.iter_mut().for_each(|o| *o /= sum);
    }
    Ok(())
}

/// `argmax_y ⟨u, y⟩ − ½‖y − x‖²` over the simplex, i.e. `project_simplex(x + u)`.
pub fn prox(x: &[f64], u: &[f64]) -> Result<Vec<f64>, GeometryError> {
    if x.len() != u.len() {
        return Err(GeometryError::DimensionMismatch { left: x.len(), right: u.len() });
    }
    let shifted: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + b).collect();
    project_simplex(&shifted)
}

/// ℓ2 diameter of the simplex in `d` dimensions.
pub fn diameter(d: usize) -> f64 {
    if d >= 2 {
        std::f64::consts::SQRT_2
    } else {
        0.0
    }
}

/// `D_X² = Σ_i D_{X_i}²` for a product of simplices.
pub fn product_diameter_sq(dims: &[usize]) -> f64 {
    dims.iter().map(|&d| diameter(d).powi(2)).sum()
}

pub fn product_diameter(dims: &[usize]) -> f64 {
    product_diameter_sq(dims).sqrt()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// Nonnegative entries summing to one within `tol`.
pub fn is_simplex_point(x: &[f64], tol: f64) -> bool {
    !x.is_empty() && x.iter().all(|&v| v >= -1e-12) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clips_to_vertex() {
        assert_eq!(project_simplex(&[2.0, 0.0]).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn rejects_nan() {
        assert_eq!(project_simplex(&[0.0, f64::NAN]), Err(GeometryError::NonFinite { index: 1 }));
        assert_eq!(project_simplex(&[]), Err(GeometryError::Empty));
    }

    #[test]
    fn zero_utility_prox_is_identity() {
        assert_eq!(prox(&[0.5, 0.5], &[0.0, 0.0]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(1), 0.0);
        assert_eq!(diameter(2), 2f64.sqrt());
        assert!((product_diameter(&[3, 3, 3]) - 6f64.sqrt()).abs() < 1e-15);
    }
}
