//! Euclidean ℤ-lattices presented by Gram matrices.

mod enumerate;
mod glue;
mod isometry;
mod qe;
mod zlattice;

pub use enumerate::{cholesky, fincke_pohst, is_positive_definite, lll_gram, minimum, short_vectors, Cholesky, ShortVectors};
pub use glue::{glue, Glued, SubgroupSpec};
pub use isometry::{is_isometric, MAX_ISOMETRY_RANK};
pub use qe::{gauss_sum, is_anisotropic, milgram_value, primary_gauss_sum, residue, Element, QeModule};
pub use zlattice::{dual, index_of, Dual, ZLattice};
