// Wizard state with session-storage persistence: answers survive a
// refresh mid-form and are cleared the moment a result is displayed.

import type { AnswerValue, Locale } from "./api";

export const STORAGE_KEY = "amiscreen.wizard";

export interface WizardState {
  locale: Locale;
  answers: Record<string, AnswerValue>;
  step: number; // 0 = intro, 1..n = questions, n+1 = review
  status: "idle" | "submitting" | "done";
}

export function initialState(locale: Locale = "en"): WizardState {
  return { locale, answers: {}, step: 0, status: "idle" };
}

export function saveState(storage: Storage, state: WizardState): void {
  const snapshot = { locale: state.locale, answers: state.answers, step: state.step };
  storage.setItem(STORAGE_KEY, JSON.stringify(snapshot));
}

export function restoreState(storage: Storage): WizardState | null {
  const raw = storage.getItem(STORAGE_KEY);
  if (!raw) return null;
  try {
    const snapshot = JSON.parse(raw);
    if (typeof snapshot !== "object" || snapshot === null) return null;
    const locale: Locale = snapshot.locale === "hi" ? "hi" : "en";
    return {
      locale,
      answers: snapshot.answers ?? {},
      step: typeof snapshot.step === "number" ? snapshot.step : 0,
      status: "idle",
    };
  } catch {
    return null;
  }
}

export function clearState(storage: Storage): void {
  storage.removeItem(STORAGE_KEY);
}

export function unansweredCodes(
  state: WizardState,
  codes: string[],
): string[] {
  return codes.filter((code) => !(code in state.answers) || state.answers[code] === "");
}
