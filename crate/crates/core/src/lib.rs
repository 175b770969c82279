//! Indexed sequence representations and a deterministic benchmark harness
//! for comparing them.
//!
//! Every representation implements [`Sequence`], a 0-based indexed list
//! contract. [`OracleList`] is a plain `Vec` wrapper used as the reference
//! model in tests.
//!
//! | id            | type             | layout                                        |
//! |---------------|------------------|-----------------------------------------------|
//! | `nocachelist` | [`NoCacheList`]  | doubly linked, walks from the nearer end      |
//! | `linkedlist`  | [`LinkedList`]   | doubly linked with an index cache             |
//! | `singlelist`  | [`SingleList`]   | singly linked with an index cache             |
//! | `arraylist`   | [`ArrayList`]    | left-aligned growable array                   |
//! | `arrayring`   | [`ArrayRing`]    | circular power-of-two array                   |
//! | `arrayblock`  | [`ArrayBlock`]   | circular table of circular fixed-size blocks  |

pub mod array;
pub mod bench;
pub mod block;
pub mod cli;
pub mod linked;
pub mod oracle;
pub mod prng;
pub(crate) mod ring;
pub mod script;
pub mod sequence;

pub use array::{ArrayList, ArrayRing};
pub use bench::{run_bench, BenchError, BenchId, BenchResult, BenchSpec};
pub use block::ArrayBlock;
pub use linked::{LinkedList, NoCacheList, SingleList};
pub use oracle::OracleList;
pub use prng::Prng;
pub use sequence::{new_sequence, Counters, Element, SeqError, Sequence, StructureId};
