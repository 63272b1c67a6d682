//! The `.stpa` safety-model language: parsing with source-located
//! diagnostics and a canonical pretty-printer.
//!
//! ```text
//! accident <ID> "<text>" [note "<text>"]
//! hazard <ID> "<text>" leads_to [<ID>, ...] [condition "<phrase>"]
//! constraint <ID> "<text>" mitigates [<ID>, ...]
//! structure { controller|actuator|process|sensor|external <ID> "<label>"
//!             action <ID> from <NODE> to <NODE> "<label>" [payload "<f>", ...]
//!             feedback <ID> from <NODE> to <NODE> "<label>" }
//! process_model of <CONTROLLER> { var <name> : { <v1>, <v2>, ... } ... }
//! item <ID> "<name>" members [<NODE>, ...] purpose "<text>"
//! situation <ID> "<text>" [mode "<text>"]
//! classify <HAZARD> severity S<0-3> exposure E<0-4>
//! event <ID> hazard <HAZARD> situation <SITUATION> [controllability C<0-3>]
//! goal <ID> event <EVENT> asil <QM|A|B|C|D> "<text>"
//! uca <ID> action <ACTION> type <guide word> [context { <var>=<value>, ..., ["<text>"] }]
//!     "<text>" hazards [<ID>, ...] [status <candidate|confirmed|rejected>]
//! csc <ID> uca <UCA> "<text>"
//! scenario <ID> uca <UCA> factor <category> "<text>" [constraint "<text>"]
//! default_controllability C<0-3>
//! ```

mod lexer;
mod parser;
mod printer;

pub use parser::{parse, parse_bytes, Parsed, SpanTable};
pub use printer::{quote, serialize, uca_line, HEADER};
