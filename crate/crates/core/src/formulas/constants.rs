//! Displayed constants, one literal per monomial.
//!
//! A coefficient is a list of `(q-exponent, integer)` pairs. Monomials are
//! exponent vectors over `(X, Y, Z)`, `(x, y, z)` or `(T)` as noted.

pub type Coef = &'static [(i64, i64)];

/// A monomial with its coefficient.
pub type Term<const N: usize> = ([u32; N], Coef);

/// A summand `coef * mono / prod (1 - q^e m)^k`, factors listed with
/// repetition.
pub struct FracTerm {
    pub coef: Coef,
    pub mono: [u32; 3],
    pub den: &'static [(i64, [u32; 3])],
}

const XONE: [u32; 3] = [1, 0, 0];
const XY: [u32; 3] = [1, 1, 0];
const XZ: [u32; 3] = [1, 0, 1];
const XYZ: [u32; 3] = [1, 1, 1];
const XY2Z: [u32; 3] = [1, 2, 1];
const YONE: [u32; 3] = [0, 1, 0];
const ZONE: [u32; 3] = [0, 0, 1];
const YZ: [u32; 3] = [0, 1, 1];
const ONE: [u32; 3] = [0, 0, 0];

/// `P = a0 + a1 X + a2 X^2 + a3 X^3` over `(X, Y, Z)`.
pub const P_TERMS: &[Term<3>] = &[
    // a0
    ([0, 0, 0], &[(8, 4), (7, 10)]),
    ([0, 1, 0], &[(6, 8), (5, -4)]),
    ([0, 1, 1], &[(4, -18)]),
    // a1
    ([1, 0, 0], &[(10, 1), (9, 8), (8, -3), (7, -10)]),
    ([1, 0, 1], &[(8, 2), (7, -11), (6, -1)]),
    ([1, 1, 0], &[(8, 5), (7, -20), (6, -9), (5, 4)]),
    ([1, 1, 1], &[(7, -1), (6, -32), (5, 6), (4, 19)]),
    ([1, 1, 2], &[(5, -6), (4, 19), (3, 1)]),
    ([1, 2, 1], &[(5, -5), (4, 12), (3, 5)]),
    ([1, 2, 2], &[(3, 12), (2, 5), (1, -1)]),
    // a2
    ([2, 0, 0], &[(11, 1), (10, 1), (9, -6)]),
    ([2, 1, 0], &[(9, -1), (8, -7), (7, 18)]),
    ([2, 0, 1], &[(9, -1), (8, -4), (7, 9)]),
    ([2, 1, 1], &[(8, -14), (7, 5), (6, 32), (5, -5)]),
    ([2, 1, 2], &[(6, 11), (5, 6), (4, -17)]),
    ([2, 2, 1], &[(6, 8), (5, 14), (4, -10), (3, -4)]),
    ([2, 2, 2], &[(5, 13), (4, 2), (3, -18), (2, -7)]),
    ([2, 3, 2], &[(3, -7), (2, -7)]),
    ([2, 2, 3], &[(3, -6), (2, -6)]),
    // a3
    ([3, 1, 1], &[(10, -1), (9, -2), (8, 11), (7, -6)]),
    ([3, 1, 2], &[(8, 1), (7, 2), (6, -8), (5, 3)]),
    ([3, 2, 1], &[(8, 1), (7, 2), (6, -5), (5, -6)]),
    ([3, 2, 2], &[(7, 1), (6, 1), (5, -13), (4, -4), (3, 3)]),
    ([3, 2, 3], &[(5, -1), (4, -2), (3, 4), (2, 5)]),
    ([3, 3, 2], &[(5, -1), (4, -2), (3, 5), (2, 6)]),
    ([3, 3, 3], &[(3, 1), (2, 2), (1, 2), (0, 1)]),
];

/// The q-power in front of `P`.
pub const P_QPOW: i64 = -11;

/// Denominator of the `I = {1, 2}` formula, over `(X, Y, Z)`.
pub const P_DEN: &[(i64, [u32; 3])] = &[
    (0, XONE),
    (0, XY),
    (0, XZ),
    (-2, YONE),
    (-2, ZONE),
    (-3, YZ),
    (-1, XYZ),
];

/// `N = A0 + A1 z + A2 z^2 + A3 z^3` over `(x, y, z)`.
pub const N_TERMS: &[Term<3>] = &[
    // A0
    ([0, 0, 0], &[(0, 1)]),
    ([1, 0, 0], &[(0, 5)]),
    ([1, 1, 0], &[(0, 6)]),
    ([2, 1, 0], &[(1, 3), (0, -2)]),
    ([3, 1, 0], &[(1, 3), (0, -4)]),
    ([3, 2, 0], &[(1, -6)]),
    ([4, 2, 0], &[(1, -6)]),
    // A1
    ([2, 1, 1], &[(1, 1), (0, -5)]),
    ([2, 2, 1], &[(1, 1), (0, -6)]),
    ([3, 1, 1], &[(1, -1), (0, -1)]),
    ([3, 2, 1], &[(0, 1), (1, -5), (2, -5)]),
    ([3, 3, 1], &[(1, -1), (0, -1)]),
    ([4, 2, 1], &[(0, 5), (1, -3), (2, -14)]),
    ([4, 3, 1], &[(0, 1), (1, 6), (2, -6), (3, -4)]),
    ([5, 2, 1], &[(1, 1), (2, 1)]),
    ([5, 3, 1], &[(1, 8), (2, 8), (3, -7)]),
    ([5, 4, 1], &[(1, 1), (2, 1)]),
    ([6, 3, 1], &[(1, -1), (2, 4), (3, 5)]),
    ([6, 4, 1], &[(1, -1), (3, 13)]),
    ([7, 4, 1], &[(2, -1), (3, 5)]),
    // A2
    ([4, 3, 2], &[(2, 5), (3, -1)]),
    ([5, 3, 2], &[(2, 13), (4, -1)]),
    ([5, 4, 2], &[(2, 5), (3, 4), (4, -1)]),
    ([6, 3, 2], &[(3, 1), (4, 1)]),
    ([6, 4, 2], &[(2, -7), (3, 8), (4, 8)]),
    ([6, 5, 2], &[(3, 1), (4, 1)]),
    ([7, 4, 2], &[(2, -4), (3, -6), (4, 6), (5, 1)]),
    ([7, 5, 2], &[(3, -14), (4, -3), (5, 5)]),
    ([8, 4, 2], &[(5, -1), (4, -1)]),
    ([8, 5, 2], &[(5, 1), (4, -5), (3, -5)]),
    ([8, 6, 2], &[(5, -1), (4, -1)]),
    ([9, 5, 2], &[(5, -6), (4, 1)]),
    ([9, 6, 2], &[(5, -5), (4, 1)]),
    // A3
    ([7, 5, 3], &[(4, -6)]),
    ([8, 6, 3], &[(4, 3), (5, -4)]),
    ([8, 5, 3], &[(4, -6)]),
    ([9, 6, 3], &[(4, 3), (5, -2)]),
    ([10, 6, 3], &[(5, 6)]),
    ([10, 7, 3], &[(5, 5)]),
    ([11, 7, 3], &[(5, 1)]),
];

/// Denominator of `F`, over `(x, y, z)`.
pub const N_DEN: &[(i64, [u32; 3])] = &[
    (0, [1, 0, 0]),
    (0, [1, 1, 0]),
    (0, [1, 1, 1]),
    (1, [2, 1, 0]),
    (2, [2, 1, 1]),
    (2, [2, 2, 1]),
    (3, [3, 2, 1]),
];

/// `W_1`, ..., `W_8` over `(X, Y, Z)`.
pub const W_TERMS: [&[FracTerm]; 8] = [
    &[FracTerm {
        coef: &[(0, 1), (-1, 2), (-2, 2), (-3, 1)],
        mono: ONE,
        den: &[(0, XONE), (0, XY), (0, XZ)],
    }],
    &[FracTerm {
        coef: &[(-1, 1), (-2, 8), (-3, 1)],
        mono: ONE,
        den: &[(0, XZ), (0, XY), (-1, XYZ)],
    }],
    &[FracTerm {
        coef: &[(-3, 7), (-4, 7)],
        mono: ONE,
        den: &[(0, XZ), (-1, XYZ), (-2, ZONE)],
    }],
    &[
        FracTerm {
            coef: &[(-3, 10), (-4, -2)],
            mono: ONE,
            den: &[(0, XY), (-3, XY2Z), (-1, XYZ)],
        },
        FracTerm {
            coef: &[(-6, 12), (-7, -12)],
            mono: XY2Z,
            den: &[(0, XY), (-3, XY2Z), (-3, XY2Z), (-1, XYZ)],
        },
    ],
    &[
        FracTerm {
            coef: &[(-5, 6), (-6, 6)],
            mono: ONE,
            den: &[(0, XY), (-2, YONE), (-3, XY2Z)],
        },
        FracTerm {
            coef: &[(-5, 12), (-6, -12)],
            mono: ONE,
            den: &[(0, XY), (-2, YONE), (-3, XY2Z), (-3, XY2Z)],
        },
    ],
    &[
        FracTerm {
            coef: &[(-4, 6)],
            mono: ONE,
            den: &[(-1, XYZ), (-4, YZ), (-2, ZONE)],
        },
        FracTerm {
            coef: &[(-3, 4), (-4, 4)],
            mono: ONE,
            den: &[(-1, XYZ), (-3, YZ), (-2, ZONE)],
        },
    ],
    &[
        FracTerm {
            coef: &[(-7, 6)],
            mono: ONE,
            den: &[(-1, XYZ), (-3, XY2Z), (-4, YZ)],
        },
        FracTerm {
            coef: &[(-6, 16), (-7, -8)],
            mono: ONE,
            den: &[(-1, XYZ), (-3, XY2Z), (-3, YZ)],
        },
        FracTerm {
            coef: &[(-9, 12), (-10, -12)],
            mono: XY2Z,
            den: &[(-1, XYZ), (-3, XY2Z), (-3, XY2Z), (-3, YZ)],
        },
    ],
    &[
        FracTerm {
            coef: &[(-6, 6)],
            mono: ONE,
            den: &[(-3, XY2Z), (-2, YONE), (-4, YZ)],
        },
        FracTerm {
            coef: &[(-5, 12)],
            mono: ONE,
            den: &[(-3, XY2Z), (-2, YONE), (-3, YZ)],
        },
        FracTerm {
            coef: &[(-8, 12), (-9, -12)],
            mono: XY2Z,
            den: &[(-3, XY2Z), (-3, XY2Z), (-2, YONE), (-3, YZ)],
        },
    ],
];

/// Monomial multipliers of `W_1..W_8` in the sum giving the `I = {1, 2}`
/// function: `X^2 W1 + X W2 + XZ W3 + XY W4 + XY^2 W5 + W6 + XY^2Z W7 + Y W8`.
pub const W_WEIGHTS: [[u32; 3]; 8] = [[2, 0, 0], XONE, XZ, XY, [1, 2, 0], ONE, XY2Z, YONE];

/// Numerator of the local factor for `Z^4`, by power of `T`.
pub const Z4_NUM: &[Term<1>] = &[
    ([0], &[(0, 1)]),
    ([1], &[(0, 4)]),
    ([2], &[(0, 2)]),
    ([3], &[(1, 4), (0, -3)]),
    ([4], &[(1, 5), (0, -1)]),
    ([5], &[(2, 1), (1, -5)]),
    ([6], &[(2, 3), (1, -4)]),
    ([7], &[(2, -2)]),
    ([8], &[(2, -4)]),
    ([9], &[(2, -1)]),
];

/// Denominator of the local factor for `Z^4`.
pub const Z4_DEN: &[(i64, [u32; 1])] = &[(0, [1]), (0, [1]), (2, [4]), (3, [6])];
