//! Interned cell identifiers.
//!
//! A loaded complex stores cells in dense vectors; these newtypes are the
//! indices into them. Keeping them distinct types (instead of bare `usize`)
//! has caught more bugs than any other single decision in this crate.

use std::fmt;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $tag:expr) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($tag, "{}"), self.0)
            }
        }
    };
}

id_type!(
    /// Index of a vertex within its complex.
    VertexId, "v"
);
id_type!(
    /// Index of an edge within its complex.
    EdgeId, "e"
);
id_type!(
    /// Index of a square within its complex.
    SquareId, "s"
);

/// One of the two ends of an edge. The `0` end is the edge's first endpoint.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum End {
    Zero,
    One,
}

impl End {
    #[inline]
    pub fn flip(self) -> End {
        match self {
            End::Zero => End::One,
            End::One => End::Zero,
        }
    }

    #[inline]
    pub fn as_index(self) -> usize {
        match self {
            End::Zero => 0,
            End::One => 1,
        }
    }
}
