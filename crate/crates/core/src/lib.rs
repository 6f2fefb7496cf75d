//! Tree adjoining grammars in regular form: the adjunction calculus, a
//! brute-force derivation oracle, the spine-graph decision procedure for
//! regular form, compilation to tree automata, cubic-time recognition and
//! lexicalization of context-free grammars.

pub mod automaton;
pub mod cli;
pub mod cycles;
pub mod error;
pub mod grammar;
pub mod lexicalizer;
pub mod oracle;
pub mod recognizer;
pub mod spine;
pub mod text;
pub mod tree;

pub use automaton::{accepts, compile_regular_tag, enumerate_accepted, run_automaton, CompileOptions, StateId, TreeAutomaton};
pub use error::{Error, Result};
pub use grammar::{
    adjoin, eliminate_improper, is_proper, project_labels, proper_segments, spine, substitute, validate_grammar,
    NamedTree, ProjectionMap, TagGrammar, TreeKind,
};
pub use lexicalizer::{build_lcg, cfg_to_regular_tag, cfg_to_tsg, close_substitution, Cfg, ExpansionStrategy, Lcg, Production};
pub use oracle::{
    enumerate_derived, enumerate_regular, is_derivable, is_regular_step, language_up_to, sample_language, Derivability,
    DerivationBudget, Enumeration,
};
pub use recognizer::{derive_yield_cfg, recognize, Recognizer, YieldGrammar};
pub use spine::{build_spine_graph, check_regular_form, extend_to_regular_form, simple_cycles, to_dot, trace_wfc, SpineGraph};
pub use text::{parse_cfg_file, parse_grammar_file, parse_tree, render_grammar, FormatError};
pub use tree::{NodeAddress, Symbol, SymbolKind, TokenString, Tree};
