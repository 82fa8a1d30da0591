//! A small language for q-series identities and the catalog written in it.

pub mod ast;
pub mod catalog;
pub mod eval;
pub mod form;
pub mod parser;

pub use ast::{render, ExprNode, IdentityAST, Monomial};
pub use catalog::{catalog, entry, render_entry, CatalogEntry, Reading};
pub use eval::{evaluate, evaluate_sides, verify, verify_entry, DEFAULT_BIVARIATE, DEFAULT_Q_ORDER};
pub use form::Form;
pub use parser::{parse, parse_entry, parse_expr};
