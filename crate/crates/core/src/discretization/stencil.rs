//! Constant-coefficient stencils of the Q1 finite-element and five-point
//! finite-difference operators.

/// Three-point stencil `scale · [w₋, w₀, w₊]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil1d {
    pub weights: [f64; 3],
    pub scale: f64,
}

impl Stencil1d {
    pub fn tap(&self, offset: isize) -> f64 {
        self.scale * self.weights[(offset + 1) as usize]
    }

    /// `scale · weights` as plain numbers.
    pub fn taps(&self) -> [f64; 3] {
        self.weights.map(|w| self.scale * w)
    }
}

/// Nine-point stencil; `weights[dy + 1][dx + 1]` multiplies the value at
/// offset `(dx, dy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil3x3 {
    pub weights: [[f64; 3]; 3],
    pub scale: f64,
}

impl Stencil3x3 {
    pub fn tap(&self, dx: isize, dy: isize) -> f64 {
        self.scale * self.weights[(dy + 1) as usize][(dx + 1) as usize]
    }

    /// Tensor product: `x_part` acts along x, `y_part` along y.
    pub fn tensor(x_part: &Stencil1d, y_part: &Stencil1d) -> Self {
        let mut weights = [[0.0; 3]; 3];
        for (dy, row) in weights.iter_mut().enumerate() {
            for (dx, w) in row.iter_mut().enumerate() {
                *w = y_part.weights[dy] * x_part.weights[dx];
            }
        }
        Self {
            weights,
            scale: x_part.scale * y_part.scale,
        }
    }

    /// Sum of two stencils, folding both scales into the weights.
    pub fn sum(a: &Self, b: &Self) -> Self {
        let mut weights = [[0.0; 3]; 3];
        for dy in 0..3 {
            for dx in 0..3 {
                weights[dy][dx] = a.scale * a.weights[dy][dx] + b.scale * b.weights[dy][dx];
            }
        }
        Self {
            weights,
            scale: 1.0,
        }
    }
}

/// Q1 stiffness in 1D: `(1/h)·[-1, 2, -1]`.
pub fn stencil_stiffness_1d(h: f64) -> Stencil1d {
    Stencil1d {
        weights: [-1.0, 2.0, -1.0],
        scale: 1.0 / h,
    }
}

/// Q1 mass in 1D: `(h/6)·[1, 4, 1]`.
pub fn stencil_mass_1d(h: f64) -> Stencil1d {
    Stencil1d {
        weights: [1.0, 4.0, 1.0],
        scale: h / 6.0,
    }
}

/// Bilinear stiffness `K₁⊗M₁ + M₁⊗K₁`, i.e. `(1/3)·[-1 -1 -1; -1 8 -1; -1 -1 -1]`
/// for every h.
pub fn stencil_stiffness_2d(h: f64) -> Stencil3x3 {
    let (k1, m1) = (stencil_stiffness_1d(h), stencil_mass_1d(h));
    Stencil3x3::sum(&Stencil3x3::tensor(&k1, &m1), &Stencil3x3::tensor(&m1, &k1))
}

/// Bilinear mass `M₁⊗M₁ = (h²/36)·[1 4 1; 4 16 4; 1 4 1]`.
pub fn stencil_mass_2d(h: f64) -> Stencil3x3 {
    let m1 = stencil_mass_1d(h);
    Stencil3x3::tensor(&m1, &m1)
}

/// Five-point Laplacian `(1/h²)·[0 -1 0; -1 4 -1; 0 -1 0]`.
pub fn stencil_fd_laplacian(h: f64) -> Stencil3x3 {
    Stencil3x3 {
        weights: [[0.0, -1.0, 0.0], [-1.0, 4.0, -1.0], [0.0, -1.0, 0.0]],
        scale: 1.0 / (h * h),
    }
}
