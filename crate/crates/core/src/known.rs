//! A few standard expressions, spelled out in code so tests and examples
//! don't have to parse catalog files to get at them. The shipped catalogs
//! under `catalogs/` carry the full lists; these are the ones used as
//! reference points everywhere.

use crate::ineq::BellInequality;

/// The CHSH facet in probability coordinates:
/// `-p_A1 - p_B1 + p_11 + p_12 + p_21 - p_22 ≤ 0`.
pub fn chsh() -> BellInequality {
    BellInequality::from_ints(&[-1, 0], &[-1, 0], &[&[1, 1], &[1, -1]], 0)
}

/// The three-setting facet that is not a lifting of CHSH:
/// `-2p_A1 - p_A2 - p_B1 + p_11 + p_12 + p_13 + p_21 + p_22 - p_23 + p_31 - p_32 ≤ 0`.
pub fn i3322() -> BellInequality {
    BellInequality::from_ints(
        &[-2, -1, 0],
        &[-1, 0, 0],
        &[&[1, 1, 1], &[1, 1, -1], &[1, -1, 0]],
        0,
    )
}

/// The first of the four-setting facets beyond the CHSH/three-setting
/// families, in the outcome labeling whose best qubit strategies use
/// rank-one projectors on every setting (which is the labeling the
/// variational search wants to see).
pub fn i4422_1() -> BellInequality {
    BellInequality::from_ints(
        &[0, -1, -1, 0],
        &[0, -1, -1, 0],
        &[
            &[-1, -1, 1, -1],
            &[-1, -1, 1, 1],
            &[1, 1, 1, 0],
            &[-1, 1, 0, 0],
        ],
        0,
    )
}
