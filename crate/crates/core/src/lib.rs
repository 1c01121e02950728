//! Verification and construction kernel for saturated k-planar drawings.

pub mod canon;
pub mod connectivity;
pub mod dsl;
pub mod families;
pub mod insert;
pub mod layout;
pub mod metrics;
pub mod planarization;
pub mod saturation;
pub mod search;
pub mod styles;

pub use connectivity::{components_and_cuts, ConnectivityReport};
pub use dsl::{emit, parse, parse_drawing, Document, DslError};
pub use families::{generate, glue, CatalogEntry, Family, FamilyError, FamilyId};
pub use insert::{CrossingSplit, Pen, PenOptions};
pub use layout::{check_topology, layout, render_svg, Layout, Layout32, Layout64, LayoutError};
pub use metrics::{alpha, counts, CountsReport, IdentityReport, MetricsError};
pub use planarization::{
    Anchor, Cell, CellId, CellMap, Corner, DartId, EdgeId, EdgeTrace, Host, NodeId, NodeKind, Planarization,
    PlanarizationError, ValidationReport, Violation,
};
pub use saturation::{check_saturated, is_filled, is_tight, SaturationError, SaturationStatus, SaturationVerdict};
pub use styles::{check_style, Restriction, Restrictions, StyleSpec, StyleVerdict};
