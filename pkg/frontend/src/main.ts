import { ApiClient } from "./api";
import { QuestionnaireApp } from "./wizard";
import "./styles.css";

const root = document.getElementById("app");
if (root) {
  const app = new QuestionnaireApp(root, new ApiClient(), window.sessionStorage);
  void app.start();
}
