#pragma once

// Population file store. One record per line:
//
//   DXNN-POPULATION 1
//   POP <population id> <limit> <rng seed> <next id serial>
//   DXNN <network id> <fitness|none>
//   CORE {Id, SensorList, ActuatorList, ParameterList, SupervisedNeuronIds, Generation, History}
//   NEURON {Id, InputList, OutputList, ActivationFunction, LearningMethod, WeightList, ParameterList, Generation}
//   ...
//   END <member count>
//
// with
//   SensorList    [{s3, range, 5, [{n7, block, 0}, ...]}, ...]
//   ActuatorList  [{a4, drive, 2, [n8, n9]}, ...]
//   History       [{add_neuron, n9, "info"}, ...]
//   InputList     [{s3, 5}, {n7, 1}, {c2, 10}, ...]
//   WeightList    [w0, w1, ..., {bias, wb}]
//   ParameterList [{"key", "value"}, ...]
//
// Each CORE and its NEURON lines follow their DXNN line. Reals are written in
// shortest round-trip form, so save(load(file)) reproduces the file exactly.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dxnn/genotype.hpp"

namespace dxnn {

void write_population(std::ostream& out, const Population& population);
Population read_population(std::istream& in);

void save(const Population& population, const std::filesystem::path& path);
Population load(const std::filesystem::path& path);

std::string format_real(double value);

} // namespace dxnn
