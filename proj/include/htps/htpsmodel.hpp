#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htps/checkpoint.hpp"
#include "htps/featurize.hpp"
#include "htps/nnengine.hpp"
#include "htps/records.hpp"

namespace htps {

// Checkpoint model-kind tags. `htps` is a dense+sparse model whose
// autoencoders were initialized by a transfer plan (provenance in metadata).
inline constexpr const char* kKindMlp = "mlp";
inline constexpr const char* kKindDen = "den";
inline constexpr const char* kKindDsen = "dsen";
inline constexpr const char* kKindHtps = "htps";

// Encoder compresses one feature's W-vector to a single embedding value;
// the decoder mirrors it back to W values.
struct Autoencoder {
  Mlp encoder;  // widths [W, W, 32, 256, 6, 1]
  Mlp decoder;  // widths [1, 6, 256, 32, W]
};

// Composite predictor: one autoencoder per feature, an optional shared
// embedder for sparse rows, and a prediction head over the concatenated
// embeddings [dense (N), sparse (W)].
struct HtpsModel {
  std::vector<Autoencoder> autoencoders;  // size N
  std::optional<Mlp> sparse_embed;        // widths [N, N, 32, 256, 6, 1]
  Mlp prediction;                         // input N (+W with sparse path)
  double loss_weight_lambda = 1.0;
  int window = 0;

  int n_features() const { return static_cast<int>(autoencoders.size()); }
  bool has_sparse_path() const { return sparse_embed.has_value(); }
};

std::vector<std::size_t> encoder_widths(int window);
std::vector<std::size_t> decoder_widths(int window);
std::vector<std::size_t> sparse_embed_widths(int n_features);
std::vector<std::size_t> prediction_widths(int input_dim);

// Subnetwork seeds are derived per-network from `seed`.
HtpsModel init_htps_model(const DatasetSpec& spec, bool with_sparse_path,
                          double lambda, std::uint64_t seed);

HtpsModel zero_like(const HtpsModel& model);
void set_zero(HtpsModel& model);
std::size_t param_count(const HtpsModel& model);
ParamRefs param_refs(HtpsModel& model);

struct HtpsForwardCache {
  std::vector<MlpCache> encoder_caches;  // N
  std::vector<MlpCache> decoder_caches;  // N
  Vector embeddings;                     // N
  std::vector<Vector> reconstructions;   // N vectors of W
  std::vector<MlpCache> sparse_caches;   // W (empty without sparse path)
  Vector sparse_embeddings;              // W
  MlpCache prediction_cache;
  double prediction = 0.0;
};

// Column j of `dense` runs through autoencoder j; each row of `sparse` runs
// through the shared sparse embedder; the prediction head consumes the
// concatenated embeddings. `sparse` must be null iff the model has no sparse
// path.
void htps_forward(const HtpsModel& model, const Matrix& dense,
                  const Matrix* sparse, HtpsForwardCache& cache);

struct HtpsLossBreakdown {
  double total = 0.0;
  double prediction_mse = 0.0;
  Vector reconstruction_mae;  // N entries
};

// total = MSE(prediction, label) + lambda * sum_j MAE(reconstruction_j,
// dense column j).
HtpsLossBreakdown htps_loss(const HtpsModel& model,
                            const HtpsForwardCache& cache, const Matrix& dense,
                            double label);

// Joint backward over the total loss, scaled by `scale` (use 1/batch for
// mini-batch averaging). Prediction-error gradients reach both embedding
// paths; reconstruction gradients reach the decoders and add onto the
// encoder gradients.
void htps_backward(const HtpsModel& model, const HtpsForwardCache& cache,
                   const Matrix& dense, double label, double scale,
                   HtpsModel& grads);

// --- MLP baseline ----------------------------------------------------------

Vector flatten(const Matrix& m);

// Same layer pattern as the prediction head, over the flattened dense
// matrix (input W*N).
std::vector<std::size_t> default_mlp_widths(const DatasetSpec& spec);

// Hidden widths scaled so the baseline's parameter count approaches
// `target_params`; used to size the baseline against a composite model.
std::vector<std::size_t> parity_mlp_widths(const DatasetSpec& spec,
                                           std::size_t target_params);

Mlp build_mlp_baseline(const DatasetSpec& spec,
                       const std::vector<std::size_t>& widths,
                       std::uint64_t seed);

// --- Checkpoint packing ----------------------------------------------------

Checkpoint to_checkpoint(const Mlp& mlp,
                         std::map<std::string, std::string> metadata);
Checkpoint to_checkpoint(const HtpsModel& model, const std::string& kind,
                         std::map<std::string, std::string> metadata);
Mlp mlp_from_checkpoint(const Checkpoint& ckpt);
HtpsModel htps_from_checkpoint(const Checkpoint& ckpt);

}  // namespace htps
