//! Planar 3-SAT (every variable in exactly three clauses) compiled into
//! rook and queen independent-domination instances on 3D polycubes.
//!
//! [`sat`] parses and generates formulas, [`gadget`] holds the transcribed
//! gadget boards and checks their lemmas by exhaustive solving, [`rook`] and
//! [`queen`] assemble full reductions, and [`layout`] carries the bookkeeping
//! shared by both.

pub mod gadget;
pub mod layout;
pub mod queen;
pub mod rook;
pub mod sat;

pub use gadget::{builtin_templates, check_gadget, template, GadgetError, GadgetReport, GadgetTemplate, Scenario};
pub use layout::{
    assignment_to_placement, placement_to_assignment, ClauseWiring, Connector, GadgetKind, GadgetPlacement,
    LayoutCounts, ReductionBundle, ReductionError, ReductionLayout, StateGroup,
};
pub use queen::{reduce_queens, reduce_queens_with_plan, PlanConnector, QueenPlan, TipSide};
pub use rook::{connection_stack, reduce_rooks};
pub use sat::{generate_p3sat3, parse_sat, Clause, Literal, SatError, SatInstance};
