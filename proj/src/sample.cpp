#include "wavefit/sample.hpp"

#include <algorithm>
#include <cmath>

#include "wavefit/errors.hpp"

namespace wavefit {

std::vector<double> sorted_values(const HsSample& sample) {
    std::vector<double> out = sample.values;
    std::sort(out.begin(), out.end());
    return out;
}

void validate(const HsSample& sample) {
    for (double v : sample.values) {
        if (!std::isfinite(v) || v <= 0)
            throw DomainError("sample values must be finite and > 0");
    }
    if (!sample.timestamps.empty()) {
        if (sample.timestamps.size() != sample.values.size())
            throw DomainError("timestamps must be absent or one per value");
        for (std::size_t i = 1; i < sample.timestamps.size(); ++i) {
            if (sample.timestamps[i] <= sample.timestamps[i - 1])
                throw DomainError("timestamps must be strictly increasing");
        }
    }
}

}  // namespace wavefit
