//! The homotopy category of bounded complexes of pure sheaves: labelled block complexes,
//! Homs up to homotopy, the perverse t-structure, and resolutions of sheaves by pure ones.

mod blocks;
mod complex;
mod lfcomplex;
mod pure;
mod random;
mod resolve;
mod tstructure;

#[cfg(test)]
mod tests;

pub use blocks::{Additive, BlockMat, CoCat, Label};
pub use complex::{homotopy_ambiguity, homotopy_hom, minimize, ChainMap, Complex, HomotopyHom, TermLabel};
pub use lfcomplex::{is_strong_injection, is_strong_surjection, LfChainMap, LfComplex};
pub use pure::{block_from_lf, realize, realize_chain_map, realize_map, realize_term, to_pure_complex};
pub use random::{random_complex, random_stalk_automorphisms};
pub use resolve::{flabby_hull, locally_free_cover, pure_hull, skyscraper, Cover, Hull, HullComplex};
pub use tstructure::{
    heart_normal_form, in_ge1, in_le0, perverse_cohomology, truncate, truncate_at, weight_filtration, HeartObject, Truncation, WeightData,
    WeightPiece,
};

use crate::pure_ic::PureCtx;
use crate::Result;

/// `Hom_{K^b}(X, Y{n})`.
pub fn kb_hom(ctx: &PureCtx, x: &Complex, y: &Complex, n: i64) -> Result<HomotopyHom> {
    homotopy_hom(ctx, x, &y.twist(n))
}

/// The one-term complex `ℒ^σ{n}` in degree 0.
pub fn simple(sigma: usize, n: i64) -> Complex {
    Complex::single(0, vec![Label::new(sigma, n)])
}

/// A bounded complex of pure sheaves quasi-isomorphic to a complex of locally free ones.
pub fn pure_replacement(ctx: &PureCtx, x: &LfComplex) -> Result<Complex> {
    let h = flabby_hull(x, ctx.cutoff)?;
    Ok(to_pure_complex(ctx, &h.complex)?.0)
}

/// `Hom_{D^b}(X, Y{n})` for complexes of locally free sheaves, through pure replacements.
pub fn derived_hom(ctx: &PureCtx, x: &LfComplex, y: &LfComplex, n: i64) -> Result<usize> {
    Ok(kb_hom(ctx, &pure_replacement(ctx, x)?, &pure_replacement(ctx, y)?, n)?.dim)
}
