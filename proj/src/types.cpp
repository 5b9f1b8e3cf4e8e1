/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pat/types.hpp"

namespace pat {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::IncompatibleSymmetry: return "IncompatibleSymmetry";
    case Errc::DegenerateDistance: return "DegenerateDistance";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::AccumulatorOverflow: return "AccumulatorOverflow";
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::UnsupportedDtype: return "UnsupportedDtype";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::OutsideRoi: return "OutsideRoi";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace pat
