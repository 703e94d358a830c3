pub mod bounds;
pub mod codes;
pub mod distinguisher;
pub mod gf;
pub mod linalg;
pub mod report;
pub mod syzygy;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub mod overview {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/linalg.md")]
    pub mod linalg {}
    #[doc = include_str!("../../../book/src/codes.md")]
    pub mod codes {}
    #[doc = include_str!("../../../book/src/strands.md")]
    pub mod strands {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    pub mod bounds {}
    #[doc = include_str!("../../../book/src/distinguisher.md")]
    pub mod distinguisher {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    pub mod acceptance {}
}
