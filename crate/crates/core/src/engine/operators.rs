use nalgebra::Matrix4;
use num_complex::Complex64;

pub const GG: usize = 0;
pub const SYM: usize = 1;
pub const ASYM: usize = 2;
pub const XX: usize = 3;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Collective lowering operator σ_S: XX → Ψ_S → GG, unit matrix elements.
pub fn sigma_sym() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(GG, SYM)] = ONE;
    m[(SYM, XX)] = ONE;
    m
}

/// Collective lowering operator σ_A: XX → −Ψ_A, Ψ_A → GG.
pub fn sigma_asym() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(GG, ASYM)] = ONE;
    m[(ASYM, XX)] = -ONE;
    m
}

/// σ_S⁺ + σ_S⁻
pub fn drive_operator() -> Matrix4<Complex64> {
    let s = sigma_sym();
    s + s.adjoint()
}
