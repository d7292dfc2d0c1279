use thiserror::Error;

/// Errors raised while validating inputs or running the decomposition pipelines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid vertex identifier {0:?}: identifiers are nonempty and contain no whitespace")]
    InvalidId(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("edge ({source_id}, {target_id}) has undeclared endpoint {vertex:?}")]
    UndeclaredEndpoint {
        source_id: String,
        target_id: String,
        vertex: String,
    },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("a rooted tree needs at least one vertex")]
    EmptyTree,
    #[error("loop at vertex {0:?}")]
    Loop(String),
    #[error("parallel edges {0:?} -> {1:?}")]
    ParallelEdge(String, String),
    #[error("vertex {vertex:?} has out-degree {degree}, expected at most 1")]
    OutDegree { vertex: String, degree: usize },
    #[error("cycle present: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("expected exactly one sink, found {} ({}); the graph is not connected", .0.len(), .0.join(", "))]
    SinkCount(Vec<String>),

    #[error("vertex {vertex:?} has level {level}, cannot ask for its ancestor at level {requested}")]
    LevelOutOfRange {
        vertex: String,
        level: usize,
        requested: usize,
    },

    #[error("tree vertex {0:?} has no label")]
    MissingLabel(String),
    #[error("labeling is not root-preserving: tree root {tree_root:?} maps to {image:?}, base root is {base_root:?}")]
    NotRootPreserving {
        tree_root: String,
        image: String,
        base_root: String,
    },
    #[error("tree edge {child:?} -> {parent:?} maps to {image_child:?} -> {image_parent:?}, which is not an edge of the base")]
    EdgeNotInBase {
        child: String,
        parent: String,
        image_child: String,
        image_parent: String,
    },
    #[error("trees live over different rooted tree quivers")]
    AmbientMismatch,
    #[error("gluing: {0}")]
    Gluing(String),
    #[error("{0:?} is not a downset of the ambient quiver")]
    NotADownset(String),

    #[error("elder split precondition violated: {0}")]
    ElderPrecondition(String),

    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error(
        "embedding is not order-preserving: {lower:?} <= {upper:?} but {lower_value:?} is not below {upper_value:?}"
    )]
    NotOrderPreserving {
        lower: String,
        upper: String,
        lower_value: (u32, u32),
        upper_value: (u32, u32),
    },

    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("no value given for {0}")]
    MissingValue(String),
    #[error("monotonicity violated on edge {{{0}, {1}}}: {2}")]
    NonMonotone(String, String, String),
    #[error("graph functor is not monotone along {lower:?} -> {upper:?}: {detail}")]
    FunctorNotMonotone {
        lower: String,
        upper: String,
        detail: String,
    },
    #[error("value {value} out of range 1..={n} for {cell}")]
    ValueOutOfRange { cell: String, value: u32, n: u32 },
    #[error("sublevel graph at the top level is not connected ({0} components)")]
    NotConnected(usize),
    #[error("f is not below g at {0}")]
    NotDominated(String),

    #[error("representation mismatch: {0}")]
    Shape(String),
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidId(_) => "invalid_id",
            Error::DuplicateVertex(_) => "duplicate_vertex",
            Error::UndeclaredEndpoint { .. } => "undeclared_endpoint",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::EmptyTree => "empty_tree",
            Error::Loop(_) => "loop",
            Error::ParallelEdge(..) => "parallel_edge",
            Error::OutDegree { .. } => "out_degree",
            Error::Cycle(_) => "cycle",
            Error::SinkCount(_) => "sink_count",
            Error::LevelOutOfRange { .. } => "level_out_of_range",
            Error::MissingLabel(_) => "missing_label",
            Error::NotRootPreserving { .. } => "not_root_preserving",
            Error::EdgeNotInBase { .. } => "edge_not_in_base",
            Error::AmbientMismatch => "ambient_mismatch",
            Error::Gluing(_) => "gluing",
            Error::NotADownset(_) => "not_a_downset",
            Error::ElderPrecondition(_) => "elder_precondition",
            Error::NotPartialOrder(_) => "not_partial_order",
            Error::NotOrderPreserving { .. } => "not_order_preserving",
            Error::NotSimple(_) => "not_simple",
            Error::MissingValue(_) => "missing_value",
            Error::NonMonotone(..) => "non_monotone",
            Error::FunctorNotMonotone { .. } => "functor_not_monotone",
            Error::ValueOutOfRange { .. } => "value_out_of_range",
            Error::NotConnected(_) => "not_connected",
            Error::NotDominated(_) => "not_dominated",
            Error::Shape(_) => "shape",
            Error::UnsupportedPrime(_) => "unsupported_prime",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }

    /// Internal invariant failures, as opposed to rejected input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
