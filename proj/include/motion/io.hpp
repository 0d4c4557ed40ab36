#pragma once

#include "motion/analysis.hpp"
#include "motion/topology.hpp"
#include "motion/types.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

namespace motion {

// Shortest-form decimal with 9 significant digits; "nan" for NaN.
std::string format_number(double v);

// Value after a round trip through format_number.
double quantize(double v);

void write_events_csv(std::ostream &out, const EventStream &events);
EventStream read_events_csv(std::istream &in, int field_width, int field_height);

void write_spikes_csv(std::ostream &out, const SpikeRecord &record);

void write_rates_csv(std::ostream &out, const DirectionalRates &measured, const DirectionalRates &ideal);

nlohmann::json topology_json(const NetworkGraph &net);

// Writes text to a file, creating parent directories. Throws Error on failure.
void write_file(const std::string &path, const std::string &text);

} // namespace motion
