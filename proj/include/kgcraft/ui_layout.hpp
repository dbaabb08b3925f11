#pragma once

namespace kgcraft::ui {

// Screen geometry shared by the skill event scripts and the simulator's
// click routing. Everything assumes the 1080p client layout.
inline constexpr int kScreenW = 1920;
inline constexpr int kScreenH = 1080;
inline constexpr int kCrosshairX = kScreenW / 2;
inline constexpr int kCrosshairY = kScreenH / 2;

// Cursor position right after a GUI opens.
inline constexpr int kGuiCursorX = kCrosshairX;
inline constexpr int kGuiCursorY = kCrosshairY;

// Inventory panel grid: item type slots assigned in acquisition order.
inline constexpr int kPanelOriginX = 560;
inline constexpr int kPanelOriginY = 360;
inline constexpr int kPanelPitchX = 48;
inline constexpr int kPanelPitchY = 44;
inline constexpr int kPanelCols = 8;

// Hotbar strip; slot k (1..9) at kHotbarBaseX + k * kHotbarPitch.
inline constexpr int kHotbarY = 1000;
inline constexpr int kHotbarBaseX = 715;
inline constexpr int kHotbarPitch = 45;
// Clicking anywhere in the strip while holding one buffered item assigns
// it to the first free slot.
inline constexpr int kHotbarStripX0 = 740;
inline constexpr int kHotbarStripX1 = 1180;
inline constexpr int kHotbarStripHalfH = 14;

// Craft-output slot inside any crafting/furnace GUI.
inline constexpr int kOutputSlotX = 1250;
inline constexpr int kOutputSlotY = 470;

// A click lands on a slot when within this radius of its center.
inline constexpr int kClickRadius = 12;

// Camera sensitivity: degrees of yaw/pitch per mouse pixel.
inline constexpr double kDegPerPixel = 0.15;

// Pitch below which a left press digs downward instead of mining ahead.
inline constexpr double kDigDownPitchDeg = -60.0;
// Mouse travel used by dig scripts to look down 90 degrees and back.
inline constexpr int kLookDownPixels = 600;

// Milliseconds of furnace time before the output can be collected.
inline constexpr int kSmeltTimeMs = 2000;

inline constexpr int hotbar_slot_x(int slot) { return kHotbarBaseX + slot * kHotbarPitch; }

inline constexpr int panel_x(int index) { return kPanelOriginX + (index % kPanelCols) * kPanelPitchX; }
inline constexpr int panel_y(int index) { return kPanelOriginY + (index / kPanelCols) * kPanelPitchY; }

}  // namespace kgcraft::ui
