use thiserror::Error;

use crate::ca::CaError;
use crate::cluster::ClusterError;
use crate::impact::ImpactError;
use crate::segment::SegmentError;
use crate::text::TextError;

/// Any error raised by the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Ca(#[from] CaError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Impact(#[from] ImpactError),
}
