/** Info-panel text formatting. */

/**
 * Dollar amount with a K/M/B/T suffix picked by digit count, two
 * decimals. Amounts of 10 to 12 digits divide by 1e9 and read as
 * billions (so a 12-digit amount shows as hundreds of billions).
 * Zero means the amount is unknown.
 */
export function formatAmount(value: number): string {
  if (value <= 0) return "N/A";
  const digits = String(Math.floor(value)).length;
  if (digits <= 3) return String(value);
  if (digits <= 6) return `${(value / 1e3).toFixed(2)} K`;
  if (digits <= 9) return `${(value / 1e6).toFixed(2)} M`;
  if (digits <= 12) return `${(value / 1e9).toFixed(2)} B`;
  return `${(value / 1e12).toFixed(2)} T`;
}

/** Signed two-decimal signal, or N/A when missing. */
export function formatSignal(signal: number | null): string {
  if (signal === null) return "N/A";
  return signal.toFixed(2);
}
