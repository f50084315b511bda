#include "sdeproj/projection.hpp"

#include "sdeproj/errors.hpp"

namespace sdeproj {

AmbientSde ChartSde::as_ambient() const {
  AmbientSde out;
  out.dim_state = dim_chart;
  out.dim_noise = dim_noise;
  out.drift = drift;
  out.diffusion = diffusion;
  return out;
}

std::string to_string(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::stratonovich: return "stratonovich";
    case ProjectionKind::ito_vector: return "ito_vector";
    case ProjectionKind::ito_jet: return "ito_jet";
  }
  throw InvalidArgumentError("unknown projection kind");
}

ProjectionKind parse_projection_kind(const std::string& name) {
  if (name == "stratonovich" || name == "strat") return ProjectionKind::stratonovich;
  if (name == "ito_vector" || name == "vec") return ProjectionKind::ito_vector;
  if (name == "ito_jet" || name == "jet") return ProjectionKind::ito_jet;
  throw InvalidArgumentError("unknown projection kind '" + name + "'");
}

namespace {

void check_dims(const AmbientSde& sde, const Embedding& emb) {
  sde.validate();
  emb.validate();
  if (sde.dim_state != emb.dim_ambient)
    throw InvalidArgumentError("SDE state dimension does not match the embedding's ambient dimension");
}

}  // namespace

ChartCoefficients ito_vector_coefficients(const AmbientSde& sde, const Embedding& emb, const Vector& y,
                                          double t) {
  check_dims(sde, emb);
  const Vector x = emb.phi(y);
  const Matrix pi = tangent_projection(emb, y);
  const Tensor3 d2 = emb.d2_phi(y);
  ChartCoefficients c;
  c.diffusion = pi * sde.eval_diffusion(x, t);
  Vector corrected = sde.eval_drift(x, t);
  for (int a = 0; a < sde.dim_noise; ++a) {
    const Vector ba = c.diffusion.col(a);
    for (int g = 0; g < emb.dim_ambient; ++g) corrected(g) -= 0.5 * ba.dot(d2[g] * ba);
  }
  c.drift = pi * corrected;
  return c;
}

ChartCoefficients ito_jet_coefficients(const AmbientSde& sde, const Embedding& emb, const Vector& y,
                                       double t) {
  check_dims(sde, emb);
  const Vector x = emb.phi(y);
  const ProjectionJet jet = metric_projection_jet2(emb, y);
  const Matrix b = sde.eval_diffusion(x, t);
  ChartCoefficients c;
  c.diffusion = jet.tangent_proj * b;
  c.drift = jet.tangent_proj * sde.eval_drift(x, t);
  for (int a = 0; a < sde.dim_noise; ++a) c.drift += 0.5 * jet.hessian_apply(b.col(a), b.col(a));
  return c;
}

ChartCoefficients stratonovich_coefficients(const AmbientSde& sde, const Embedding& emb, const Vector& y,
                                            double t, const StratonovichOptions& options) {
  check_dims(sde, emb);
  if (!sde.diffusion_jacobian && !options.allow_finite_differences)
    throw InvalidArgumentError(
        "stratonovich projection needs a diffusion Jacobian when finite differences are disabled");
  const Vector x = emb.phi(y);
  const Matrix d = emb.d_phi(y);
  const Tensor3 d2 = emb.d2_phi(y);
  const InducedMetric h = induced_metric(emb, y);
  const Matrix pi = h.inverse * d.transpose();
  const Matrix b = sde.eval_diffusion(x, t);
  const Tensor3 db = sde.eval_diffusion_jacobian(x, t);
  ChartCoefficients c;
  c.diffusion = pi * b;
  c.drift = pi * ito_to_stratonovich_drift(sde, x, t);
  const int n = emb.dim_chart, r = emb.dim_ambient;
  // dB_alpha/dy^j = (d_j Pi) b_alpha + Pi Db_alpha d_j phi with
  // d_j Pi = h^-1 (E_j^T - (E_j^T Dphi + Dphi^T E_j) Pi), E_j = d_j Dphi.
  Tensor3 dB(sde.dim_noise, Matrix::Zero(n, n));
  for (int j = 0; j < n; ++j) {
    Matrix e(r, n);
    for (int k = 0; k < r; ++k) e.row(k) = d2[k].col(j).transpose();
    const Matrix sym = e.transpose() * d;
    const Matrix d_pi = h.inverse * (e.transpose() - (sym + sym.transpose()) * pi);
    for (int a = 0; a < sde.dim_noise; ++a) dB[a].col(j) = d_pi * b.col(a) + pi * (db[a] * d.col(j));
  }
  for (int a = 0; a < sde.dim_noise; ++a) c.drift += 0.5 * dB[a] * c.diffusion.col(a);
  return c;
}

ChartCoefficients project_coefficients(ProjectionKind kind, const AmbientSde& sde, const Embedding& emb,
                                       const Vector& y, double t) {
  switch (kind) {
    case ProjectionKind::stratonovich: return stratonovich_coefficients(sde, emb, y, t);
    case ProjectionKind::ito_vector: return ito_vector_coefficients(sde, emb, y, t);
    case ProjectionKind::ito_jet: return ito_jet_coefficients(sde, emb, y, t);
  }
  throw InvalidArgumentError("unknown projection kind");
}

namespace {

template <class Fn>
ChartSde make_chart_sde(const AmbientSde& sde, const Embedding& emb, Fn coefficients) {
  check_dims(sde, emb);
  ChartSde out;
  out.dim_chart = emb.dim_chart;
  out.dim_noise = sde.dim_noise;
  out.drift = [sde, emb, coefficients](const Vector& y, double t) {
    return coefficients(sde, emb, y, t).drift;
  };
  out.diffusion = [sde, emb, coefficients](const Vector& y, double t) {
    return coefficients(sde, emb, y, t).diffusion;
  };
  return out;
}

}  // namespace

ChartSde ito_vector_project(const AmbientSde& sde, const Embedding& emb) {
  return make_chart_sde(sde, emb, [](const AmbientSde& s, const Embedding& e, const Vector& y, double t) {
    return ito_vector_coefficients(s, e, y, t);
  });
}

ChartSde ito_jet_project(const AmbientSde& sde, const Embedding& emb) {
  return make_chart_sde(sde, emb, [](const AmbientSde& s, const Embedding& e, const Vector& y, double t) {
    return ito_jet_coefficients(s, e, y, t);
  });
}

ChartSde stratonovich_project(const AmbientSde& sde, const Embedding& emb, const StratonovichOptions& options) {
  if (!sde.diffusion_jacobian && !options.allow_finite_differences)
    throw InvalidArgumentError(
        "stratonovich projection needs a diffusion Jacobian when finite differences are disabled");
  return make_chart_sde(sde, emb, [options](const AmbientSde& s, const Embedding& e, const Vector& y, double t) {
    return stratonovich_coefficients(s, e, y, t, options);
  });
}

ChartSde project(ProjectionKind kind, const AmbientSde& sde, const Embedding& emb) {
  switch (kind) {
    case ProjectionKind::stratonovich: return stratonovich_project(sde, emb);
    case ProjectionKind::ito_vector: return ito_vector_project(sde, emb);
    case ProjectionKind::ito_jet: return ito_jet_project(sde, emb);
  }
  throw InvalidArgumentError("unknown projection kind");
}

}  // namespace sdeproj
