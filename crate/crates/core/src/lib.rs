//! Finding sentences that describe figures in scientific articles.
//!
//! Sentences that cite a figure ("Fig. 2 shows ...") are located with a
//! pattern, their neighbours become candidates, and each candidate is
//! mapped onto an ontology-backed meaning representation. Weights learned
//! from the citing sentences score the candidates against a threshold.
//! A bag-of-words logistic regression is provided for comparison.

pub mod baseline;
pub mod corpus;
pub mod figref;
pub mod lexres;
pub mod ontology;
pub mod pipeline;
pub mod scoring;
pub mod tmr;
