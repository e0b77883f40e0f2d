// Linear questionnaire wizard: one question per screen, a review step,
// then the result view. Rendering is plain DOM; state changes re-render.

import {
  ApiClient,
  Catalog,
  CatalogItem,
  ScreeningResult,
  ServiceUnavailable,
  ValidationFailure,
  type AnswerValue,
} from "./api";
import { t } from "./i18n";
import {
  WizardState,
  clearState,
  initialState,
  restoreState,
  saveState,
  unansweredCodes,
} from "./state";

type Banner = "none" | "maintenance" | "network" | "validation";

export class QuestionnaireApp {
  private catalog: Catalog | null = null;
  private state: WizardState = initialState();
  private result: ScreeningResult | null = null;
  private banner: Banner = "none";
  private invalidCode: string | null = null;
  private catalogFailed = false;

  constructor(
    private root: HTMLElement,
    private client: ApiClient,
    private storage: Storage = window.sessionStorage,
  ) {}

  async start(): Promise<void> {
    const restored = restoreState(this.storage);
    if (restored) this.state = restored;
    await this.loadCatalog();
  }

  private async loadCatalog(): Promise<void> {
    this.catalogFailed = false;
    try {
      this.catalog = await this.client.fetchCatalog(this.state.locale);
    } catch {
      this.catalog = null;
      this.catalogFailed = true;
    }
    this.render();
  }

  async toggleLocale(): Promise<void> {
    // Answers and position are keyed by feature code, so they survive the
    // catalog swap untouched.
    this.state.locale = this.state.locale === "en" ? "hi" : "en";
    saveState(this.storage, this.state);
    await this.loadCatalog();
  }

  answer(code: string, value: AnswerValue): void {
    this.state.answers[code] = value;
    if (this.invalidCode === code) this.invalidCode = null;
    saveState(this.storage, this.state);
    this.render();
  }

  goto(step: number): void {
    const max = (this.catalog?.items.length ?? 0) + 1;
    this.state.step = Math.max(0, Math.min(step, max));
    saveState(this.storage, this.state);
    this.render();
  }

  async submit(): Promise<void> {
    if (!this.catalog || this.state.status === "submitting") return;
    if (unansweredCodes(this.state, this.codes()).length > 0) return;
    this.state.status = "submitting";
    this.banner = "none";
    this.render();
    try {
      this.result = await this.client.screen(
        this.state.answers,
        this.catalog.version,
        this.state.locale,
      );
      this.state.status = "done";
      clearState(this.storage); // no answers linger once a result is shown
    } catch (error) {
      this.state.status = "idle";
      if (error instanceof ValidationFailure) {
        this.banner = "validation";
        const named = error.issues.find((issue) =>
          this.codes().includes(issue.code),
        );
        if (named) {
          this.invalidCode = named.code;
          this.state.step = this.codes().indexOf(named.code) + 1;
          saveState(this.storage, this.state);
        }
      } else if (error instanceof ServiceUnavailable) {
        this.banner = "maintenance";
      } else {
        this.banner = "network";
      }
    }
    this.render();
    if (this.invalidCode) {
      const field = this.root.querySelector<HTMLElement>("[data-invalid='true']");
      field?.focus();
    }
  }

  restart(): void {
    this.result = null;
    this.banner = "none";
    this.invalidCode = null;
    this.state = initialState(this.state.locale);
    clearState(this.storage);
    this.render();
  }

  private codes(): string[] {
    return this.catalog ? this.catalog.items.map((item) => item.code) : [];
  }

  // ------------------------------------------------------------ rendering

  render(): void {
    const locale = this.state.locale;
    this.root.textContent = "";

    const header = el("header", {});
    header.append(el("h1", { text: t(locale, "appTitle") }));
    const toggle = el("button", {
      text: t(locale, "localeToggle"),
      attrs: { "data-testid": "locale-toggle", type: "button" },
    });
    toggle.addEventListener("click", () => void this.toggleLocale());
    header.append(toggle);
    this.root.append(header);

    if (this.banner !== "none") {
      const key =
        this.banner === "maintenance"
          ? "maintenance"
          : this.banner === "network"
            ? "networkError"
            : "validationError";
      this.root.append(
        el("div", {
          text: t(locale, key),
          attrs: { "data-testid": "banner", "data-banner": this.banner, role: "alert" },
        }),
      );
    }

    const main = el("main", {});
    this.root.append(main);

    if (this.result) {
      main.append(this.renderResult(this.result));
      return;
    }
    if (this.catalogFailed) {
      main.append(this.renderCatalogError());
      return;
    }
    if (!this.catalog) return;

    const items = this.catalog.items;
    if (this.state.step === 0) {
      main.append(this.renderIntro());
    } else if (this.state.step <= items.length) {
      main.append(this.renderQuestion(items[this.state.step - 1], this.state.step, items.length));
    } else {
      main.append(this.renderReview());
    }
  }

  private renderIntro(): HTMLElement {
    const locale = this.state.locale;
    const view = el("section", { attrs: { "data-testid": "intro" } });
    view.append(el("p", { text: t(locale, "intro") }));
    const start = el("button", {
      text: t(locale, "start"),
      attrs: { "data-testid": "start", type: "button" },
    });
    start.addEventListener("click", () => this.goto(1));
    view.append(start);
    return view;
  }

  private renderQuestion(item: CatalogItem, step: number, total: number): HTMLElement {
    const locale = this.state.locale;
    const view = el("section", {
      attrs: { "data-testid": "step", "data-code": item.code },
    });
    view.append(
      el("p", {
        text: t(locale, "progress", { current: step, total }),
        attrs: { "data-testid": "progress" },
      }),
    );
    const invalid = this.invalidCode === item.code;
    const field = el("fieldset", {
      attrs: {
        "data-testid": "question",
        "data-invalid": invalid ? "true" : "false",
        tabindex: "-1",
        ...(invalid ? { "aria-invalid": "true" } : {}),
      },
    });
    field.append(el("legend", { text: item.text }));

    const current = this.state.answers[item.code];
    if (item.kind === "number") {
      const input = el("input", {
        attrs: {
          type: "number",
          "data-testid": "answer-number",
          "aria-label": item.text,
          value: current !== undefined ? String(current) : "",
        },
      }) as HTMLInputElement;
      input.addEventListener("change", () => {
        if (input.value !== "") this.answer(item.code, Number(input.value));
      });
      field.append(input, el("span", { text: t(locale, "ageUnit") }));
    } else {
      for (const option of item.options) {
        const label = el("label", {});
        const input = el("input", {
          attrs: {
            type: "radio",
            name: item.code,
            value: option.value,
            ...(current === option.value ? { checked: "checked" } : {}),
          },
        }) as HTMLInputElement;
        input.checked = current === option.value;
        input.addEventListener("change", () => this.answer(item.code, option.value));
        label.append(input, document.createTextNode(option.label));
        field.append(label);
      }
    }
    view.append(field);

    const nav = el("nav", {});
    const back = el("button", {
      text: t(locale, "back"),
      attrs: { "data-testid": "back", type: "button" },
    });
    back.addEventListener("click", () => this.goto(this.state.step - 1));
    const next = el("button", {
      text: t(locale, "next"),
      attrs: { "data-testid": "next", type: "button" },
    });
    if (current === undefined || current === "") next.setAttribute("disabled", "disabled");
    next.addEventListener("click", () => this.goto(this.state.step + 1));
    nav.append(back, next);
    view.append(nav);
    return view;
  }

  private renderReview(): HTMLElement {
    const locale = this.state.locale;
    const view = el("section", { attrs: { "data-testid": "review" } });
    view.append(el("h2", { text: t(locale, "review") }));
    const missing = unansweredCodes(this.state, this.codes());
    if (missing.length === 0) {
      view.append(el("p", { text: t(locale, "reviewHint") }));
    } else {
      const hint = el("p", { text: t(locale, "unansweredHint") });
      hint.append(document.createTextNode(" " + missing.join(", ")));
      view.append(hint);
    }

    const nav = el("nav", {});
    const back = el("button", {
      text: t(locale, "back"),
      attrs: { "data-testid": "back", type: "button" },
    });
    back.addEventListener("click", () => this.goto(this.state.step - 1));
    const submitting = this.state.status === "submitting";
    const submit = el("button", {
      text: t(locale, submitting ? "submitting" : "submit"),
      attrs: { "data-testid": "submit", type: "button" },
    });
    if (missing.length > 0 || submitting) submit.setAttribute("disabled", "disabled");
    submit.addEventListener("click", () => void this.submit());
    nav.append(back, submit);
    view.append(nav);
    return view;
  }

  private renderResult(result: ScreeningResult): HTMLElement {
    const locale = this.state.locale;
    const view = el("section", { attrs: { "data-testid": "result" } });
    view.append(el("h2", { text: t(locale, "resultTitle") }));
    // The label is the service's response, verbatim; nothing is recomputed.
    view.append(
      el("p", { text: result.label, attrs: { "data-testid": "result-label" } }),
    );
    const percent = Math.round(result.probability * 1000) / 10;
    const bar = el("div", { attrs: { "data-testid": "result-probability" } });
    bar.append(el("span", { text: `${t(locale, "resultProbability")}: ${percent}%` }));
    const meter = el("progress", {
      attrs: { max: "100", value: String(percent) },
    });
    bar.append(meter);
    view.append(bar);
    view.append(
      el("p", { text: result.disclaimer, attrs: { "data-testid": "disclaimer" } }),
    );
    const again = el("button", {
      text: t(locale, "startOver"),
      attrs: { "data-testid": "start-over", type: "button" },
    });
    again.addEventListener("click", () => this.restart());
    view.append(again);
    return view;
  }

  private renderCatalogError(): HTMLElement {
    const locale = this.state.locale;
    const view = el("section", { attrs: { "data-testid": "catalog-error" } });
    view.append(el("p", { text: t(locale, "catalogError") }));
    const retry = el("button", {
      text: t(locale, "retry"),
      attrs: { "data-testid": "retry", type: "button" },
    });
    retry.addEventListener("click", () => void this.loadCatalog());
    view.append(retry);
    return view;
  }
}

function el(
  tag: string,
  options: { text?: string; attrs?: Record<string, string> },
): HTMLElement {
  const node = document.createElement(tag);
  if (options.text !== undefined) node.textContent = options.text;
  for (const [name, value] of Object.entries(options.attrs ?? {})) {
    node.setAttribute(name, value);
  }
  return node;
}
