#include "spansim/spansim.h"

#include <cstring>
#include <memory>
#include <unordered_map>

#include "catalog.hpp"
#include "func_eval.hpp"
#include "json_io.hpp"
#include "span_program.hpp"
#include "state_conversion.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }
void clear_error() { g_last_error.clear(); }

template <typename Fn>
spansim_status guarded(Fn&& fn) {
  clear_error();
  try {
    fn();
    return SPANSIM_OK;
  } catch (const spansim::InvalidInput& e) {
    set_error(e.what());
    return SPANSIM_ERROR_INVALID_ARGUMENT;
  } catch (const spansim::Infeasible& e) {
    set_error(e.what());
    return SPANSIM_ERROR_INFEASIBLE;
  } catch (const spansim::Unsupported& e) {
    set_error(e.what());
    return SPANSIM_ERROR_UNSUPPORTED;
  } catch (const spansim::ParseError& e) {
    set_error(e.what());
    return SPANSIM_ERROR_PARSE;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SPANSIM_ERROR_INTERNAL;
  }
}

spansim_status require(bool condition, const char* message) {
  if (condition) return SPANSIM_OK;
  clear_error();
  set_error(message);
  return SPANSIM_ERROR_INVALID_ARGUMENT;
}

spansim_status copy_string(const std::string& value, char* buffer, size_t buffer_len) {
  if (buffer == nullptr || buffer_len < value.size() + 1) {
    set_error("output buffer too small");
    return SPANSIM_ERROR_INVALID_ARGUMENT;
  }
  std::memcpy(buffer, value.c_str(), value.size() + 1);
  return SPANSIM_OK;
}

}  // namespace

struct spansim_graph {
  spansim::GraphSpec spec;
};

struct spansim_program {
  explicit spansim_program(spansim::SpanProgram p) : program(std::move(p)) {}
  spansim::SpanProgram program;
};

struct spansim_cvs {
  spansim::ConvertingVectorSet cvs;
  spansim::GramPair gram;
};

struct spansim_evaluator {
  spansim_evaluator(spansim::SpanProgram scaled_in, spansim::SpanProgram negation_in,
                    double bound)
      : scaled(std::move(scaled_in)), negation(std::move(negation_in)), witness_bound(bound) {}
  spansim::SpanProgram scaled;
  spansim::SpanProgram negation;
  double witness_bound;
  std::unordered_map<std::string, std::unique_ptr<spansim::EvalContext>> contexts;

  spansim::EvalContext& context(const std::string& x) {
    auto it = contexts.find(x);
    if (it == contexts.end()) {
      it = contexts
               .emplace(x, std::make_unique<spansim::EvalContext>(scaled, negation,
                                                                  witness_bound, x))
               .first;
    }
    return *it->second;
  }
};

struct spansim_converter {
  spansim_converter(spansim::ConvertingVectorSet cvs_in, spansim::GramPair gram_in)
      : cvs(std::move(cvs_in)), gram(std::move(gram_in)) {}
  spansim::ConvertingVectorSet cvs;
  spansim::GramPair gram;
  std::unordered_map<std::string, std::unique_ptr<spansim::ConvertContext>> contexts;

  spansim::ConvertContext& context(const std::string& x) {
    auto it = contexts.find(x);
    if (it == contexts.end()) {
      it = contexts.emplace(x, std::make_unique<spansim::ConvertContext>(cvs, gram, x)).first;
    }
    return *it->second;
  }
};

extern "C" {

const char* spansim_version(void) { return "1.0.0"; }

const char* spansim_status_name(spansim_status status) {
  switch (status) {
    case SPANSIM_OK:
      return "ok";
    case SPANSIM_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case SPANSIM_ERROR_INFEASIBLE:
      return "infeasible";
    case SPANSIM_ERROR_UNSUPPORTED:
      return "unsupported";
    case SPANSIM_ERROR_PARSE:
      return "parse error";
    case SPANSIM_ERROR_IO:
      return "io error";
    case SPANSIM_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* spansim_last_error(void) { return g_last_error.c_str(); }

spansim_status spansim_graph_create(int vertices, const int* edge_endpoints, int edge_count,
                                    int s, int t, spansim_graph** out) {
  if (auto st = require(out != nullptr && edge_endpoints != nullptr && edge_count > 0,
                        "graph_create: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    spansim::GraphSpec spec;
    spec.vertices = vertices;
    spec.s = s;
    spec.t = t;
    for (int i = 0; i < edge_count; ++i) {
      spec.edges.emplace_back(edge_endpoints[2 * i], edge_endpoints[2 * i + 1]);
    }
    spec.validate();
    *out = new spansim_graph{std::move(spec)};
  });
}

spansim_status spansim_graph_from_json_file(const char* path, spansim_graph** out) {
  if (auto st = require(out != nullptr && path != nullptr, "graph_from_json_file: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = new spansim_graph{spansim::load_graph(path)}; });
}

void spansim_graph_destroy(spansim_graph* graph) { delete graph; }

spansim_status spansim_graph_effective_resistance(const spansim_graph* graph, const char* x,
                                                  double* out) {
  if (auto st = require(graph != nullptr && x != nullptr && out != nullptr,
                        "effective_resistance: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = spansim::effective_resistance(graph->spec, x); });
}

spansim_status spansim_program_or(int n, spansim_program** out) {
  if (auto st = require(out != nullptr, "program_or: null output"); st != SPANSIM_OK) return st;
  return guarded([&] { *out = new spansim_program(spansim::build_or(n)); });
}

spansim_status spansim_program_stconn(const spansim_graph* graph, spansim_program** out) {
  if (auto st = require(graph != nullptr && out != nullptr, "program_stconn: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = new spansim_program(spansim::build_stconn(graph->spec)); });
}

spansim_status spansim_program_from_json_file(const char* path, spansim_program** out) {
  if (auto st = require(path != nullptr && out != nullptr, "program_from_json_file: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = new spansim_program(spansim::load_span_program(path)); });
}

spansim_status spansim_program_to_json_file(const spansim_program* program, const char* path) {
  if (auto st = require(program != nullptr && path != nullptr,
                        "program_to_json_file: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { spansim::save_span_program(program->program, path); });
}

void spansim_program_destroy(spansim_program* program) { delete program; }

int spansim_program_input_length(const spansim_program* program) {
  return program == nullptr ? -1 : program->program.n();
}

int spansim_program_alphabet_size(const spansim_program* program) {
  return program == nullptr ? -1 : program->program.q();
}

int spansim_program_input_count(const spansim_program* program) {
  if (program == nullptr) return -1;
  try {
    return static_cast<int>(program->program.all_inputs().size());
  } catch (const std::exception&) {
    return -1;
  }
}

spansim_status spansim_program_input_at(const spansim_program* program, int index, char* buffer,
                                        size_t buffer_len) {
  if (auto st = require(program != nullptr, "program_input_at: null program"); st != SPANSIM_OK) {
    return st;
  }
  spansim_status status = SPANSIM_OK;
  auto guard_status = guarded([&] {
    const auto inputs = program->program.all_inputs();
    if (index < 0 || static_cast<std::size_t>(index) >= inputs.size()) {
      throw spansim::InvalidInput("program_input_at: index out of range");
    }
    status = copy_string(inputs[static_cast<std::size_t>(index)], buffer, buffer_len);
  });
  return guard_status != SPANSIM_OK ? guard_status : status;
}

spansim_status spansim_program_negate(const spansim_program* program, spansim_program** out) {
  if (auto st = require(program != nullptr && out != nullptr, "program_negate: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = new spansim_program(spansim::negate(program->program)); });
}

spansim_status spansim_program_scale_normalize(const spansim_program* program,
                                               spansim_program** out) {
  if (auto st = require(program != nullptr && out != nullptr,
                        "program_scale_normalize: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    *out = new spansim_program(
        spansim::scale_normalize(program->program, program->program.all_inputs()));
  });
}

spansim_status spansim_program_witness(const spansim_program* program, const char* x,
                                       spansim_witness_info* out) {
  if (auto st = require(program != nullptr && x != nullptr && out != nullptr,
                        "program_witness: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    const spansim::Witness w = spansim::witness(program->program, x);
    out->positive = w.kind == spansim::Witness::Kind::positive ? 1 : 0;
    out->size = w.size;
  });
}

spansim_status spansim_program_witness_bound(const spansim_program* program, double* out) {
  if (auto st = require(program != nullptr && out != nullptr,
                        "program_witness_bound: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    const auto table =
        spansim::enumerate_witnesses(program->program, program->program.all_inputs());
    *out = table.max_size();
  });
}

spansim_status spansim_evaluator_create(const spansim_program* raw_program,
                                        spansim_evaluator** out) {
  if (auto st = require(raw_program != nullptr && out != nullptr,
                        "evaluator_create: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    const auto inputs = raw_program->program.all_inputs();
    spansim::SpanProgram scaled = spansim::scale_normalize(raw_program->program, inputs);
    const auto table = spansim::enumerate_witnesses(scaled, inputs);
    spansim::SpanProgram negation = spansim::negate(scaled);
    *out = new spansim_evaluator(std::move(scaled), std::move(negation), table.max_size());
  });
}

void spansim_evaluator_destroy(spansim_evaluator* evaluator) { delete evaluator; }

double spansim_evaluator_witness_bound(const spansim_evaluator* evaluator) {
  return evaluator == nullptr ? -1.0 : evaluator->witness_bound;
}

spansim_status spansim_evaluator_witness(spansim_evaluator* evaluator, const char* x,
                                         spansim_witness_info* out) {
  if (auto st = require(evaluator != nullptr && x != nullptr && out != nullptr,
                        "evaluator_witness: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    const spansim::Witness w = spansim::witness(evaluator->scaled, x);
    out->positive = w.kind == spansim::Witness::Kind::positive ? 1 : 0;
    out->size = w.size;
  });
}

spansim_status spansim_evaluator_run(spansim_evaluator* evaluator, const char* x, double delta,
                                     uint64_t seed, spansim_eval_result* out) {
  if (auto st = require(evaluator != nullptr && x != nullptr && out != nullptr,
                        "evaluator_run: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    spansim::EvalConfig cfg;
    cfg.delta = delta;
    cfg.rng_seed = seed;
    const spansim::EvalResult result = evaluator->context(x).run(cfg);
    out->output_bit = result.output_bit;
    out->rounds_used = result.rounds_used;
    out->alpha_final = result.alpha_final;
    out->queries_total = result.ledger.total;
    const auto lookup = [&](const char* label) -> uint64_t {
      const auto it = result.ledger.breakdown.find(label);
      return it == result.ledger.breakdown.end() ? 0 : it->second;
    };
    out->queries_check_program = lookup("check_program");
    out->queries_check_negation = lookup("check_negation");
  });
}

spansim_status spansim_evaluator_lemma6(spansim_evaluator* evaluator, const char* x,
                                        double alpha, double eps, spansim_lemma6_result* out) {
  if (auto st = require(evaluator != nullptr && x != nullptr && out != nullptr,
                        "evaluator_lemma6: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    const spansim::Lemma6Report report =
        spansim::lemma6_check(evaluator->scaled, x, alpha, evaluator->witness_bound, eps);
    out->probability = report.probability;
    out->positive_witness = report.kind == spansim::Witness::Kind::positive ? 1 : 0;
    out->witness_size = report.witness_size;
    out->applicable = report.applicable ? 1 : 0;
    out->holds = report.holds ? 1 : 0;
    out->bound = report.bound;
  });
}

spansim_status spansim_cvs_from_program(const spansim_program* program, spansim_cvs** out) {
  if (auto st = require(program != nullptr && out != nullptr, "cvs_from_program: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    spansim::BridgedInstance bridged =
        spansim::cvs_from_span_program(program->program, program->program.all_inputs());
    *out = new spansim_cvs{std::move(bridged.cvs), std::move(bridged.gram)};
  });
}

spansim_status spansim_cvs_from_json_file(const char* path, spansim_cvs** out) {
  if (auto st = require(path != nullptr && out != nullptr, "cvs_from_json_file: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    spansim::CvsDocument doc = spansim::load_cvs(path);
    *out = new spansim_cvs{std::move(doc.cvs), std::move(doc.gram)};
  });
}

spansim_status spansim_cvs_to_json_file(const spansim_cvs* cvs, const char* path) {
  if (auto st = require(cvs != nullptr && path != nullptr, "cvs_to_json_file: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { spansim::save_cvs(cvs->cvs, cvs->gram, path); });
}

void spansim_cvs_destroy(spansim_cvs* cvs) { delete cvs; }

spansim_status spansim_cvs_complement(const spansim_cvs* cvs, spansim_cvs** out) {
  if (auto st = require(cvs != nullptr && out != nullptr, "cvs_complement: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = new spansim_cvs{spansim::complement(cvs->cvs), cvs->gram}; });
}

spansim_status spansim_cvs_normalize(const spansim_cvs* cvs, spansim_cvs** out) {
  if (auto st = require(cvs != nullptr && out != nullptr, "cvs_normalize: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = new spansim_cvs{spansim::normalize_cvs(cvs->cvs), cvs->gram}; });
}

spansim_status spansim_cvs_validate(const spansim_cvs* cvs, double* max_residual) {
  if (auto st = require(cvs != nullptr && max_residual != nullptr, "cvs_validate: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *max_residual = spansim::validate_cvs(cvs->cvs, cvs->gram).max_residual; });
}

int spansim_cvs_input_count(const spansim_cvs* cvs) {
  return cvs == nullptr ? -1 : cvs->cvs.input_count();
}

spansim_status spansim_cvs_input_at(const spansim_cvs* cvs, int index, char* buffer,
                                    size_t buffer_len) {
  if (auto st = require(cvs != nullptr, "cvs_input_at: null handle"); st != SPANSIM_OK) return st;
  clear_error();
  if (index < 0 || index >= cvs->cvs.input_count()) {
    set_error("cvs_input_at: index out of range");
    return SPANSIM_ERROR_INVALID_ARGUMENT;
  }
  return copy_string(cvs->cvs.inputs[static_cast<std::size_t>(index)], buffer, buffer_len);
}

spansim_status spansim_cvs_witness_sizes(const spansim_cvs* cvs, const char* x, double* w_plus,
                                         double* w_minus) {
  if (auto st = require(cvs != nullptr && x != nullptr && w_plus != nullptr && w_minus != nullptr,
                        "cvs_witness_sizes: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    const int index = cvs->cvs.index_of(x);
    *w_plus = cvs->cvs.w_plus(index);
    *w_minus = cvs->cvs.w_minus(index);
  });
}

spansim_status spansim_cvs_witness_bound(const spansim_cvs* cvs, double* out) {
  if (auto st = require(cvs != nullptr && out != nullptr, "cvs_witness_bound: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = cvs->cvs.witness_bound(); });
}

spansim_status spansim_converter_create(const spansim_cvs* cvs, spansim_converter** out) {
  if (auto st = require(cvs != nullptr && out != nullptr, "converter_create: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] { *out = new spansim_converter(cvs->cvs, cvs->gram); });
}

void spansim_converter_destroy(spansim_converter* converter) { delete converter; }

spansim_status spansim_converter_run(spansim_converter* converter, const char* x, double eps,
                                     double p, uint64_t seed, spansim_convert_result* out) {
  if (auto st = require(converter != nullptr && x != nullptr && out != nullptr,
                        "converter_run: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    spansim::Rng rng(seed);
    const spansim::ConvertResult result = converter->context(x).run(eps, p, rng);
    out->distance = result.distance;
    out->alpha_stop = result.alpha_stop;
    out->used_complement = result.used_complement ? 1 : 0;
    out->flagged = result.flagged ? 1 : 0;
    out->probe_count = static_cast<int>(result.probe_trace.size());
    out->queries_total = result.ledger.total;
    const auto lookup = [&](const char* label) -> uint64_t {
      const auto it = result.ledger.breakdown.find(label);
      return it == result.ledger.breakdown.end() ? 0 : it->second;
    };
    out->queries_probe_primary = lookup("probe_primary");
    out->queries_probe_complement = lookup("probe_complement");
    out->queries_reflect = lookup("reflect");
  });
}

spansim_status spansim_converter_lemma_suite(spansim_converter* converter, const char* x,
                                             double alpha, double eps_hat,
                                             spansim_lemma_suite_result* out) {
  if (auto st = require(converter != nullptr && x != nullptr && out != nullptr,
                        "converter_lemma_suite: null argument");
      st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    const spansim::LemmaSuiteReport report =
        spansim::lemma_suite(converter->cvs, converter->gram, x, alpha, eps_hat);
    const auto pack = [](const spansim::LemmaCheck& check) {
      return spansim_lemma_check{check.applicable ? 1 : 0, check.holds ? 1 : 0, check.measured,
                                 check.bound};
    };
    out->low_phase_mass = pack(report.low_phase_mass);
    out->probe_probability = pack(report.probe_probability);
    out->plus_leakage = pack(report.plus_leakage);
    out->final_distance = pack(report.final_distance);
    out->w_plus = report.w_plus;
    out->w_minus = report.w_minus;
  });
}

spansim_status spansim_mu_nu_max_residual(int q, double* out) {
  if (auto st = require(out != nullptr, "mu_nu_max_residual: null output"); st != SPANSIM_OK) {
    return st;
  }
  return guarded([&] {
    const spansim::MuNu basis = spansim::mu_nu(q);
    const double offdiag = static_cast<double>(q) / (2.0 * (static_cast<double>(q) - 1.0));
    double worst = 0.0;
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) {
        const double expected = i == j ? 0.0 : offdiag;
        const spansim::Complex value =
            basis.mu[static_cast<std::size_t>(i)].dot(basis.nu[static_cast<std::size_t>(j)]);
        worst = std::max(worst, std::abs(value - spansim::Complex(expected, 0.0)));
      }
    }
    *out = worst;
  });
}

uint64_t spansim_mix_seed(uint64_t base, uint64_t a, uint64_t b) {
  return spansim::mix_seed(base, a, b);
}

}  // extern "C"
