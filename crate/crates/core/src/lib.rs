//! Character theory of finite crossed modules and the premodular data of
//! their module categories, in exact cyclotomic arithmetic.

pub mod chartab;
pub mod cyclo;
pub mod group;
pub mod linalg;
pub mod objects;
pub mod premodular;
pub mod xchar;
pub mod xmod;

pub use chartab::{character_table, CharacterTable};
pub use cyclo::{CycRing, Cyclotomic};
pub use group::{Group, GroupError};
pub use xchar::{CharacterTheory, XCharacter};
pub use premodular::{ModularData, VacuumReport, Verdict};
pub use xmod::CrossedModule;
