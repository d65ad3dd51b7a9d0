#include "ssmooth/kernels.hpp"

namespace ssmooth {

KernelKind kernel_kind_from_name(const std::string& name) {
  if (name == "epanechnikov") return KernelKind::epanechnikov;
  if (name == "uniform") return KernelKind::uniform;
  if (name == "quartic") return KernelKind::quartic;
  if (name == "asymq") return KernelKind::asym_quadratic;
  if (name == "aitchison") return KernelKind::aitchison_aitkin;
  if (name == "wvr") return KernelKind::wang_van_ryzin;
  fail(errc::invalid_argument, "unknown kernel name: " + name);
}

std::string kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::epanechnikov: return "epanechnikov";
    case KernelKind::uniform: return "uniform";
    case KernelKind::quartic: return "quartic";
    case KernelKind::asym_quadratic: return "asymq";
    case KernelKind::aitchison_aitkin: return "aitchison";
    case KernelKind::wang_van_ryzin: return "wvr";
  }
  return "?";
}

}  // namespace ssmooth
