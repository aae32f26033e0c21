// Display helpers.
//
// The dashboard shows numbers exactly as the API serialized them: a JSON
// number parses into the same double the service emitted, and String() on a
// double is its shortest round-trip decimal form, so the rendered text stays
// byte-traceable to the payload.  Nothing here rounds, truncates or pads.

/** Render a payload number verbatim; no rounding, no locale formatting. */
export function showNumber(value: number): string {
  return String(value);
}

/** Standard label for a not-applicable indicator cell. */
export function naLabel(reason: string): string {
  return `n/a (${reason})`;
}

/** Escape text for interpolation into HTML or SVG markup. */
export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}
