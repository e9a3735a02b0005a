//! Numerical kernels used by the objectives and the analysis: k-means,
//! silhouette, PCA, multivariate least squares and a random forest.

mod forest;
mod kmeans;
mod linalg;
mod ols;
mod pca;
mod silhouette;

pub use forest::{
    accuracy, forest_fit, forest_oob_accuracy, forest_predict, DecisionTree, ForestConfig,
    ForestModel, MaxFeatures,
};
pub use kmeans::{kmeans_fit, kmeans_fit_with, KMeansModel, KMeansOptions};
pub use ols::{ols_fit, ols_predict, LinearModel};
pub use pca::{pca_fit, pca_project, PcaModel};
pub use silhouette::{silhouette, silhouette_from_distances, DistanceMatrix};
