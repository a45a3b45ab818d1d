pub mod expr;
pub mod fields;
pub mod upoly;
pub mod mpoly;
pub mod unifactor;
pub mod fedder;
pub mod dp1;
pub mod pgl2;
pub mod classify;
pub mod census;
