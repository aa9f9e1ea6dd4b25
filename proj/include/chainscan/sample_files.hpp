#pragma once

#include <cstdint>
#include <span>

namespace chainscan::samples {

/// Minimal well-formed files, one per supported type. Docx is a ZIP word package.
enum class Sample { Png, Jpeg, Gif, Pdf, Zip, SevenZip, Webp, Doc, Mp3, Mp4, Mov, Wav, Avi, Rar, Tar, Docx };

std::span<const std::uint8_t> sample(Sample which);

} // namespace chainscan::samples
