//! Stateless HTTP front end: one `POST /process` request is one frame.
//!
//! Endpoints:
//! - `POST /process`: JSON [`ProcessRequest`] in, JSON [`ProcessResponse`] out;
//! - `GET /capabilities`: deficiency kinds, operators with defaults, layouts;
//! - `GET /health`.
//!
//! Failures are `{code, message, field}` with status 400 for bad input and
//! 500 for internal faults.

mod api;
mod server;

pub use api::{
    handle_capabilities, handle_process, handle_process_json, parse_request, ApiError,
    BandsRequest, ProcessRequest, ProcessResponse, ProfileRequest, RecipeField,
};
pub use server::{router, run, serve, DEFAULT_ADDR, MAX_BODY_BYTES};
