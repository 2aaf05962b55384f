#pragma once

#include <string>
#include <vector>

#include "sdr/experiments.hpp"
#include "sdr/models.hpp"
#include "sdr/sir.hpp"

namespace sdr::io {

// Shortest round-trip decimal representation (to_chars), so golden files are
// portable and byte-stable.
std::string format_double(double value);

// CSV with header row `y,x1,...,xp`, numeric body, '\n' line endings.
// Rejects NaN/Inf and malformed rows with a 1-based line number.
models::Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const models::Dataset& data, const std::string& path);

// Fitted subspace: header `row,c1,...,cd`, an `eig` row with the top
// eigenvalues, then one row per coordinate of the loading matrix.
void write_fit_csv(const sir::SubspaceEstimate& fit, const std::string& path);

// Result schemas, one per preset:
//   table1:  mu,n,H,p,reps,mean_eig1,sd_eig1
//   table2:  mu,n,H,p,reps,ratio1_mean,ratio1_sd,ratio2_mean,ratio2_sd
//   dtsir:   model,p,s,kappa,n,reps,failures,mean_loss,sd_loss,mean_kappa_loss
//   custom:  model,mu,p,d,s,H,kappa,n,estimator,reps,failures,
//            mean_loss,sd_loss,mean_kappa_loss,mean_eig1,sd_eig1,...
void write_results_csv(const experiments::PresetResult& result,
                       const std::string& path);

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Minimal line chart: one polyline per series, labeled axes, well-formed XML.
void write_svg_lines(const std::vector<SvgSeries>& series,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& path);

// The kappa-curve plots for a dtsir_curves run: per model, mean loss and
// kappa * mean loss against kappa, one polyline per p. Returns the files
// written.
std::vector<std::string> write_dtsir_svgs(
    const experiments::PresetResult& result, const std::string& dir);

}  // namespace sdr::io
