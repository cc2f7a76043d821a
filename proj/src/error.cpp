#include "sonata/error.hpp"

namespace sonata {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NotConnected: return "NotConnected";
    case Errc::DegenerateMixing: return "DegenerateMixing";
    case Errc::InvalidGossip: return "InvalidGossip";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::BadHyper: return "BadHyper";
    case Errc::NotSmooth: return "NotSmooth";
    case Errc::InfeasibleInit: return "InfeasibleInit";
    case Errc::NumericalBlowup: return "NumericalBlowup";
    case Errc::NoProgress: return "NoProgress";
    case Errc::MixingTooWeak: return "MixingTooWeak";
    case Errc::InvalidRegime: return "InvalidRegime";
    case Errc::RegimeNotApplicable: return "RegimeNotApplicable";
    case Errc::ExponentUnbounded: return "ExponentUnbounded";
    case Errc::NotConverged: return "NotConverged";
    case Errc::WindowTooSmall: return "WindowTooSmall";
    case Errc::EmptyLevelBand: return "EmptyLevelBand";
    case Errc::BadConfig: return "BadConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sonata
