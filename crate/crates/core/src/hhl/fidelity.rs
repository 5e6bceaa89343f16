use super::HhlError;

/// Squared overlap `(⟨x̂', x̂⟩)²` of the unit-normalized vectors; insensitive
/// to the sign of either input.
pub fn fidelity(reference: &[f64], candidate: &[f64]) -> Result<f64, HhlError> {
    if reference.len() != candidate.len() {
        return Err(HhlError::LengthMismatch(reference.len(), candidate.len()));
    }
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (nr, nc) = (norm(reference), norm(candidate));
    if !(nr > 0.0 && nc > 0.0) {
        return Err(HhlError::ZeroVector);
    }
    let dot: f64 = reference.iter().zip(candidate).map(|(a, b)| a * b).sum();
    let overlap = dot / (nr * nc);
    Ok((overlap * overlap).min(1.0))
}

/// Additive state error implied by a fidelity: `√(2 (1 − √f))`.
pub fn epsilon_from_fidelity(fidelity: f64) -> Result<f64, HhlError> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(HhlError::FidelityOutOfRange(fidelity));
    }
    Ok((2.0 * (1.0 - fidelity.sqrt())).sqrt())
}
