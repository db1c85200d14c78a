//! Exact computations around Boij-Soderberg cones over graded rings with a
//! linear Noether normalization.
//!
//! * [`tables`]: Betti tables, degree and codimension sequences.
//! * [`pure`]: Herzog-Kuhl pure diagrams.
//! * [`cone`]: cone membership (exact LP) and greedy decomposition.
//! * [`hilbert`]: Hilbert series, multiplicity and regularity from tables.
//! * [`koszul`]: Koszul-homology oracle for monomial modules.
//! * [`sheaf`]: cohomology tables on projective space and lim Ulrich checks.
//! * [`io`]: text and JSON formats.

pub mod cone;
pub mod hilbert;
pub mod io;
pub mod koszul;
pub mod linalg;
pub mod lp;
pub mod pure;
pub mod sheaf;
pub mod tables;

pub use cone::{greedy_decompose, membership, short_complex_membership, Decomposition, MembershipVerdict};
pub use hilbert::{
    e_of_beta, g_beta, hilb_from_betti, multiplicity_bounds, regularity_from_betti, BoundsReport,
    HilbertSeries, LaurentPoly,
};
pub use koszul::{dim_codim, koszul_betti, monomial_hilbert, multiplicity, MonomialModule, Summand};
pub use pure::{enumerate_degree_sequences, herzog_kuhl, is_pure, PureDiagram};
pub use sheaf::{
    en_sequence, frobenius_pushforward, lim_ulrich_check, line_bundle_table, product_p1_table,
    u_trivial_check, ulrich_test, CohomTable, TableSequence,
};
pub use tables::{
    compatible, BettiTable, CodimLevel, CodimensionSequence, DegreeSequence, Rational, Region, Window,
};
